#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "dlra/matrix_kernels.hpp"

namespace dlra {

/// Factored rank-r matrix Y = U S V^T.
///
/// U (m x r) and V (n x r) have orthonormal columns; S is a general r x r
/// matrix and may be singular. The factorization is not unique, so compare
/// states through assemble(), never factor by factor.
class LowRankState {
public:
    static constexpr double kOrthonormalityTolerance = 1e-11;

    /// Factors whose columns drift from orthonormality by more than the
    /// tolerance are re-orthonormalized, with the triangular correction
    /// absorbed into S so that U S V^T is unchanged.
    LowRankState(Matrix u, Matrix s, Matrix v) : u_(std::move(u)), s_(std::move(s)), v_(std::move(v)) {
        const Index r = u_.cols();
        if (r < 1) {
            throw RankError("LowRankState: rank must be positive");
        }
        if (v_.cols() != r || s_.rows() != r || s_.cols() != r) {
            throw DimensionError("LowRankState: factor shapes are inconsistent");
        }
        if (r > u_.rows() || r > v_.rows()) {
            throw RankError("LowRankState: rank " + std::to_string(r) + " exceeds min(m, n)");
        }
        require_finite(u_, "LowRankState u");
        require_finite(s_, "LowRankState s");
        require_finite(v_, "LowRankState v");
        if (orthonormality_defect(u_) > kOrthonormalityTolerance) {
            ThinFactorization f = thin_qr(u_);
            u_ = std::move(f.q);
            s_ = f.r_factor * s_;
        }
        if (orthonormality_defect(v_) > kOrthonormalityTolerance) {
            ThinFactorization f = thin_qr(v_);
            v_ = std::move(f.q);
            s_ = s_ * f.r_factor.transpose();
        }
    }

    const Matrix& u() const { return u_; }
    const Matrix& s() const { return s_; }
    const Matrix& v() const { return v_; }
    Index rank() const { return s_.rows(); }
    Index rows() const { return u_.rows(); }
    Index cols() const { return v_.rows(); }

private:
    Matrix u_;
    Matrix s_;
    Matrix v_;
};

struct RankChangeReport {
    Index old_rank = 0;
    Index new_rank = 0;
    double discarded_weight = 0.0;
};

inline Matrix assemble(const LowRankState& y) { return y.u() * y.s() * y.v().transpose(); }

/// Unconditional QR re-orthonormalization of both factors.
inline LowRankState orthonormalize_factors(const Matrix& u, const Matrix& s, const Matrix& v) {
    ThinFactorization fu = thin_qr(u);
    ThinFactorization fv = thin_qr(v);
    return LowRankState(std::move(fu.q), fu.r_factor * s * fv.r_factor.transpose(), std::move(fv.q));
}

/// Best rank-r approximation in the Frobenius norm, with S = diag(sigma_1..r).
inline LowRankState truncate_to_rank(const Matrix& a, Index r) {
    if (r < 1 || r > std::min(a.rows(), a.cols())) {
        throw RankError("truncate_to_rank: rank " + std::to_string(r) + " outside [1, " +
                        std::to_string(std::min(a.rows(), a.cols())) + "]");
    }
    const SvdResult dec = svd(a);
    return LowRankState(dec.u.leftCols(r), dec.sigma.head(r).asDiagonal(), dec.v.leftCols(r));
}

/// Orthogonal projection onto the tangent space of the rank-r manifold at Y:
/// P(Y) Z = Z V V^T - U U^T Z V V^T + U U^T Z.
inline Matrix tangent_project(const LowRankState& y, const Matrix& z) {
    if (z.rows() != y.rows() || z.cols() != y.cols()) {
        throw DimensionError("tangent_project: z does not match the state dimensions");
    }
    const Matrix& u = y.u();
    const Matrix& v = y.v();
    const Matrix zv = z * v;
    const Matrix utz = u.transpose() * z;
    return (zv - u * (u.transpose() * zv)) * v.transpose() + u * utz;
}

inline constexpr std::uint64_t kDefaultCompletionSeed = 0x5eed'c0de'0000'0001ULL;

namespace detail {

inline Matrix orthonormal_completion(const Matrix& basis, Index extra, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix stacked(basis.rows(), basis.cols() + extra);
    stacked.leftCols(basis.cols()) = basis;
    for (Index j = 0; j < extra; ++j) {
        for (Index i = 0; i < basis.rows(); ++i) {
            stacked(i, basis.cols() + j) = normal(rng);
        }
    }
    return thin_qr(stacked).q.rightCols(extra);
}

} // namespace detail

/// Raise the rank to r_new, keeping the assembled matrix unchanged.
///
/// U and V are completed with orthonormal columns from a seeded Gaussian
/// block; S is padded with zeros, so the new core is singular.
inline LowRankState increase_rank(const LowRankState& y, Index r_new,
                                  std::uint64_t seed = kDefaultCompletionSeed) {
    const Index r = y.rank();
    if (r_new < r) {
        throw RankError("increase_rank: new rank is below the current rank");
    }
    if (r_new > std::min(y.rows(), y.cols())) {
        throw RankError("increase_rank: new rank " + std::to_string(r_new) + " exceeds min(m, n)");
    }
    if (r_new == r) {
        return y;
    }
    std::mt19937_64 rng(seed);
    const Index extra = r_new - r;
    Matrix u(y.rows(), r_new);
    u << y.u(), detail::orthonormal_completion(y.u(), extra, rng);
    Matrix v(y.cols(), r_new);
    v << y.v(), detail::orthonormal_completion(y.v(), extra, rng);
    Matrix s = Matrix::Zero(r_new, r_new);
    s.topLeftCorner(r, r) = y.s();
    return LowRankState(std::move(u), std::move(s), std::move(v));
}

/// Lower the rank by truncating the SVD of the small core and rotating the
/// kept singular directions into U and V.
inline std::pair<LowRankState, RankChangeReport> decrease_rank(const LowRankState& y, Index r_new) {
    const Index r = y.rank();
    if (r_new < 1 || r_new > r) {
        throw RankError("decrease_rank: new rank must lie in [1, " + std::to_string(r) + "]");
    }
    const SvdResult core = svd(y.s());
    LowRankState out(y.u() * core.u.leftCols(r_new), core.sigma.head(r_new).asDiagonal(),
                     y.v() * core.v.leftCols(r_new));
    return {std::move(out), RankChangeReport{r, r_new, tail_norm(core.sigma, r_new)}};
}

} // namespace dlra
