#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dlra/errors.hpp"

namespace dlra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) {
        throw NonFiniteError(std::string(what) + ": non-finite entries");
    }
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
}

inline double frobenius_norm(const Matrix& a) { return a.norm(); }

inline double frobenius_inner(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "frobenius_inner");
    return (a.array() * b.array()).sum();
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("multiply: inner dimensions " + std::to_string(a.cols()) +
                             " and " + std::to_string(b.rows()) + " differ");
    }
    return a * b;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    return a + b;
}

inline Matrix subtract(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    return a - b;
}

inline Matrix transpose(const Matrix& a) { return a.transpose(); }

/// ||a^T a - I||_F, the deviation of the columns of `a` from orthonormality.
inline double orthonormality_defect(const Matrix& a) {
    return (a.transpose() * a - Matrix::Identity(a.cols(), a.cols())).norm();
}

/// Thin QR factor pair: q is m x r with orthonormal columns, r_factor is
/// upper triangular with a nonnegative diagonal.
struct ThinFactorization {
    Matrix q;
    Matrix r_factor;
};

/// Householder thin QR with the nonnegative-diagonal sign convention.
///
/// No pivoting. Rank-deficient input still yields an orthonormal q (the
/// Householder reflectors are orthogonal regardless); r_factor then has zero
/// diagonal entries.
inline ThinFactorization thin_qr(const Matrix& a) {
    if (a.rows() < a.cols()) {
        throw DimensionError("thin_qr: rows (" + std::to_string(a.rows()) +
                             ") < cols (" + std::to_string(a.cols()) + ")");
    }
    require_finite(a, "thin_qr");
    const Index m = a.rows();
    const Index r = a.cols();
    Eigen::HouseholderQR<Matrix> qr(a);
    ThinFactorization out;
    out.q = qr.householderQ() * Matrix::Identity(m, r);
    out.r_factor = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (Index i = 0; i < r; ++i) {
        if (out.r_factor(i, i) < 0.0) {
            out.r_factor.row(i) *= -1.0;
            out.q.col(i) *= -1.0;
        }
    }
    return out;
}

struct SvdResult {
    Matrix u;
    Vector sigma;  // nonincreasing
    Matrix v;
};

inline SvdResult svd(const Matrix& a) {
    require_finite(a, "svd");
    Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

inline Vector singular_values(const Matrix& a) {
    require_finite(a, "singular_values");
    Eigen::BDCSVD<Matrix> dec(a);
    return dec.singularValues();
}

/// sqrt(sum_{i >= k} sigma_i^2): the Frobenius distance from `sigma`'s matrix
/// to its best rank-k approximation.
inline double tail_norm(const Vector& sigma, Index k) {
    if (k >= sigma.size()) {
        return 0.0;
    }
    return sigma.tail(sigma.size() - k).norm();
}

inline double skew_defect(const Matrix& t) { return (t + t.transpose()).norm(); }

inline void require_skew(const Matrix& t, double tol) {
    if (t.rows() != t.cols()) {
        throw DimensionError("skew generator must be square");
    }
    const double defect = skew_defect(t);
    if (defect > tol * std::max(1.0, t.norm())) {
        throw SymmetryError("generator is not skew-symmetric: ||T + T^T||_F = " +
                            std::to_string(defect));
    }
}

/// exp(t * generator) * q0: the solution of Q' = T Q with Q(0) = q0.
///
/// Pade scaling-and-squaring, followed by a QR polish when the result drifts
/// from orthogonality by more than 1e-11.
inline Matrix skew_orthogonal_path(double t, const Matrix& generator, const Matrix& q0) {
    require_finite(generator, "skew_orthogonal_path");
    require_finite(q0, "skew_orthogonal_path");
    require_skew(generator, 1e-13);
    if (q0.rows() != generator.rows()) {
        throw DimensionError("skew_orthogonal_path: q0 rows do not match generator");
    }
    if (orthonormality_defect(q0) > 1e-12) {
        throw DimensionError("skew_orthogonal_path: q0 is not orthogonal");
    }
    if (t == 0.0) {
        return q0;
    }
    const Matrix scaled = t * generator;
    Matrix rotation = scaled.exp();
    if (orthonormality_defect(rotation) > 1e-11) {
        rotation = thin_qr(rotation).q;
    }
    return rotation * q0;
}

/// Spectral form of the orthogonal flow exp(t T) for a constant skew T.
///
/// The real Schur form of a skew-symmetric matrix is block diagonal with
/// 2x2 blocks [[0, -w], [w, 0]], so T = Z W Z^T with Z orthogonal and
/// exp(t T) = Z R(t) Z^T where R(t) is a direct sum of planar rotations.
/// Once Z is known, applying R(t) costs O(n) per column.
class SkewRotationFlow {
public:
    struct Plane {
        Index first;  // rotation acts on coordinates (first, first + 1)
        double omega;
    };

    explicit SkewRotationFlow(const Matrix& generator) {
        require_finite(generator, "SkewRotationFlow");
        require_skew(generator, 1e-13);
        const Index n = generator.rows();
        Eigen::RealSchur<Matrix> schur(generator);
        basis_ = schur.matrixU();
        const Matrix& block = schur.matrixT();
        for (Index i = 0; i < n;) {
            if (i + 1 < n && block(i + 1, i) != 0.0) {
                planes_.push_back({i, 0.5 * (block(i + 1, i) - block(i, i + 1))});
                i += 2;
            } else {
                ++i;
            }
        }
        const Matrix rebuilt = basis_ * apply_generator_rows(Matrix::Identity(n, n)) *
                               basis_.transpose();
        if ((rebuilt - generator).norm() > 1e-10 * std::max(1.0, generator.norm())) {
            throw SymmetryError("SkewRotationFlow: Schur form is not block-rotational");
        }
    }

    Index size() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }
    std::span<const Plane> planes() const { return planes_; }

    /// m <- R(t) m
    void rotate_rows(double t, Matrix& m) const {
        for (const Plane& p : planes_) {
            const double c = std::cos(p.omega * t);
            const double s = std::sin(p.omega * t);
            for (Index j = 0; j < m.cols(); ++j) {
                const double x = m(p.first, j);
                const double y = m(p.first + 1, j);
                m(p.first, j) = c * x - s * y;
                m(p.first + 1, j) = s * x + c * y;
            }
        }
    }

    /// m <- m R(t)
    void rotate_cols(double t, Matrix& m) const {
        for (const Plane& p : planes_) {
            const double c = std::cos(p.omega * t);
            const double s = std::sin(p.omega * t);
            auto x = m.col(p.first);
            auto y = m.col(p.first + 1);
            const Vector xs = x;
            x = c * xs + s * y;
            y = -s * xs + c * y;
        }
    }

    /// W m, with W the block generator in the Schur basis.
    Matrix apply_generator_rows(const Matrix& m) const {
        Matrix out = Matrix::Zero(m.rows(), m.cols());
        for (const Plane& p : planes_) {
            out.row(p.first) = -p.omega * m.row(p.first + 1);
            out.row(p.first + 1) = p.omega * m.row(p.first);
        }
        return out;
    }

    /// m W
    Matrix apply_generator_cols(const Matrix& m) const {
        Matrix out = Matrix::Zero(m.rows(), m.cols());
        for (const Plane& p : planes_) {
            out.col(p.first) = p.omega * m.col(p.first + 1);
            out.col(p.first + 1) = -p.omega * m.col(p.first);
        }
        return out;
    }

    /// exp(t T) in the original coordinates.
    Matrix at(double t) const {
        Matrix r = basis_.transpose();
        rotate_rows(t, r);
        return basis_ * r;
    }

private:
    Matrix basis_;
    std::vector<Plane> planes_;
};

} // namespace dlra
