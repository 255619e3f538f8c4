#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <random>
#include <string>

#include "dlra/matrix_kernels.hpp"
#include "dlra/matrix_path.hpp"

namespace dlra {

/// Parameters of the benchmark family
///   A(t) = Q1(t) (A1 + e^t A2) Q2(t),   Qi' = Ti Qi,  Qi(0) = I.
struct ProblemSpec {
    Index m = 100;
    Index n = 100;
    Index core_rank = 10;
    double eps = 1e-3;
    std::uint64_t seed = 1;
    double t_end = 1.0;
};

inline void validate(const ProblemSpec& spec) {
    if (spec.m < 1 || spec.n < 1) {
        throw ConfigError("problem dimensions must be positive");
    }
    if (spec.core_rank < 1 || spec.core_rank > std::min(spec.m, spec.n)) {
        throw ConfigError("core rank must lie in [1, min(m, n)]");
    }
    if (!(spec.eps >= 0.0) || !std::isfinite(spec.eps)) {
        throw ConfigError("eps must be finite and nonnegative");
    }
    if (!(spec.t_end > 0.0) || !std::isfinite(spec.t_end)) {
        throw ConfigError("t_end must be finite and positive");
    }
}

/// Uniform doubles from a 64-bit Mersenne Twister: the top 53 bits of each
/// draw scaled to [0, 1), then mapped affinely onto [lo, hi). Fixed here
/// rather than delegated to std::uniform_real_distribution so the stream is
/// identical across standard libraries.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double next(double lo, double hi) {
        const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * unit;
    }

    /// rows x cols matrix filled in row-major order.
    Matrix matrix(Index rows, Index cols, double lo, double hi) {
        Matrix out(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                out(i, j) = next(lo, hi);
            }
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

/// The random ingredients of one problem instance.
struct ProblemData {
    Matrix a1;
    Matrix a2;
    Matrix t1;  // m x m skew
    Matrix t2;  // n x n skew
};

/// Draws, in this stream order: core block of A1, core block of A2,
/// perturbation of A1, perturbation of A2, pre-generator of T1, pre-generator
/// of T2. Blocks are I + U[0, 0.5]; perturbations are U[0, eps] over the full
/// matrix; Ti = (G - G^T) / 2 with G ~ U[-0.5, 0.5].
inline ProblemData draw_problem_data(const ProblemSpec& spec) {
    validate(spec);
    UniformStream rng(spec.seed);
    const Index q = spec.core_rank;
    ProblemData d;
    d.a1 = Matrix::Zero(spec.m, spec.n);
    d.a2 = Matrix::Zero(spec.m, spec.n);
    d.a1.topLeftCorner(q, q) = Matrix::Identity(q, q) + rng.matrix(q, q, 0.0, 0.5);
    d.a2.topLeftCorner(q, q) = Matrix::Identity(q, q) + rng.matrix(q, q, 0.0, 0.5);
    d.a1 += rng.matrix(spec.m, spec.n, 0.0, spec.eps);
    d.a2 += rng.matrix(spec.m, spec.n, 0.0, spec.eps);
    const Matrix g1 = rng.matrix(spec.m, spec.m, -0.5, 0.5);
    const Matrix g2 = rng.matrix(spec.n, spec.n, -0.5, 0.5);
    d.t1 = 0.5 * (g1 - g1.transpose());
    d.t2 = 0.5 * (g2 - g2.transpose());
    return d;
}

/// FNV-1a over the IEEE bit patterns of A1, A2, T1, T2 (row-major, in that
/// order). Pins the generator's stream-order contract.
inline std::uint64_t digest(const ProblemData& d) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const Matrix& a) {
        for (Index i = 0; i < a.rows(); ++i) {
            for (Index j = 0; j < a.cols(); ++j) {
                const double x = a(i, j);
                std::uint64_t bits = 0;
                std::memcpy(&bits, &x, sizeof bits);
                for (int b = 0; b < 8; ++b) {
                    h ^= (bits >> (8 * b)) & 0xffU;
                    h *= 0x100000001b3ULL;
                }
            }
        }
    };
    feed(d.a1);
    feed(d.a2);
    feed(d.t1);
    feed(d.t2);
    return h;
}

/// A generated benchmark instance.
///
/// Besides the ambient path A(t), it exposes the same path in the rotated
/// frame C(t) = Z1^T A(t) Z2, where Zi are the Schur bases of the generators.
/// There C(t) = R1(t) (B1 + e^t B2) R2(t) with block rotations Ri, so each
/// evaluation is O(mn) instead of a dense matrix exponential. Frobenius
/// errors, SVDs and every splitting/midpoint step are equivariant under the
/// fixed orthogonal change of frame, so experiments run there.
class Problem {
public:
    explicit Problem(const ProblemSpec& spec) : impl_(std::make_shared<const Impl>(spec)) {}

    const ProblemSpec& spec() const { return impl_->spec; }
    const ProblemData& data() const { return impl_->data; }
    const Matrix& left_frame() const { return impl_->flow1.basis(); }
    const Matrix& right_frame() const { return impl_->flow2.basis(); }

    Matrix value(double t) const { return impl_->value(t); }
    Matrix derivative(double t) const { return impl_->derivative(t); }
    Matrix frame_value(double t) const { return impl_->frame_value(t); }
    Matrix frame_derivative(double t) const { return impl_->frame_derivative(t); }

    /// The ambient path A(t) with its analytic derivative.
    MatrixPath path() const {
        auto impl = impl_;
        MatrixPath p;
        p.rows = impl->spec.m;
        p.cols = impl->spec.n;
        p.value = [impl](double t) { return impl->value(t); };
        p.derivative = [impl](double t) { return impl->derivative(t); };
        return p;
    }

    /// The path in the rotated frame, with its analytic derivative.
    MatrixPath frame_path() const {
        auto impl = impl_;
        MatrixPath p;
        p.rows = impl->spec.m;
        p.cols = impl->spec.n;
        p.value = [impl](double t) { return impl->frame_value(t); };
        p.derivative = [impl](double t) { return impl->frame_derivative(t); };
        return p;
    }

private:
    struct Impl {
        explicit Impl(const ProblemSpec& s)
            : spec(s), data(draw_problem_data(s)), flow1(data.t1), flow2(data.t2),
              b1(flow1.basis().transpose() * data.a1 * flow2.basis()),
              b2(flow1.basis().transpose() * data.a2 * flow2.basis()) {}

        Matrix value(double t) const {
            return flow1.at(t) * (data.a1 + std::exp(t) * data.a2) * flow2.at(t);
        }

        // Product rule with Q1' = T1 Q1 and Q2' = T2 Q2 = Q2 T2.
        Matrix derivative(double t) const {
            const Matrix q1 = flow1.at(t);
            const Matrix q2 = flow2.at(t);
            const Matrix a = q1 * (data.a1 + std::exp(t) * data.a2) * q2;
            return data.t1 * a + std::exp(t) * (q1 * data.a2 * q2) + a * data.t2;
        }

        Matrix frame_value(double t) const {
            Matrix c = b1 + std::exp(t) * b2;
            flow1.rotate_rows(t, c);
            flow2.rotate_cols(t, c);
            return c;
        }

        Matrix frame_derivative(double t) const {
            const Matrix c = frame_value(t);
            Matrix moving = std::exp(t) * b2;
            flow1.rotate_rows(t, moving);
            flow2.rotate_cols(t, moving);
            return flow1.apply_generator_rows(c) + moving + flow2.apply_generator_cols(c);
        }

        ProblemSpec spec;
        ProblemData data;
        SkewRotationFlow flow1;
        SkewRotationFlow flow2;
        Matrix b1;
        Matrix b2;
    };

    std::shared_ptr<const Impl> impl_;
};

/// The ambient benchmark path for `spec`.
inline MatrixPath generate_problem(const ProblemSpec& spec) { return Problem(spec).path(); }

} // namespace dlra
