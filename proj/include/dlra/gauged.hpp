#pragma once

#include <cmath>
#include <limits>

#include "dlra/low_rank.hpp"
#include "dlra/matrix_path.hpp"

namespace dlra {

/// Time derivative of the factors under the gauge U^T U' = 0, V^T V' = 0.
struct GaugedDerivative {
    Matrix u_dot;
    Matrix s_dot;
    Matrix v_dot;
};

inline constexpr double kDefaultConditionCap = 1e12;

namespace detail {

/// Right-hand side of the factor system evaluated on raw factors, which need
/// not be exactly orthonormal (implicit-midpoint stage values are not).
inline GaugedDerivative gauged_rhs_raw(const Matrix& u, const Matrix& s, const Matrix& v, const Matrix& a_dot,
                                       double condition_cap) {
    Eigen::JacobiSVD<Matrix> core(s);
    const Vector& sigma = core.singularValues();
    const double condition = sigma(sigma.size() - 1) > 0.0 ? sigma(0) / sigma(sigma.size() - 1)
                                                           : std::numeric_limits<double>::infinity();
    if (!(condition <= condition_cap)) {
        throw SingularCoreError(condition, condition_cap);
    }
    const Eigen::PartialPivLU<Matrix> lu(s);
    const Eigen::PartialPivLU<Matrix> lu_t(s.transpose());
    const Matrix adv = a_dot * v;
    const Matrix atu = a_dot.transpose() * u;
    GaugedDerivative d;
    d.s_dot = u.transpose() * adv;
    // X S^{-1} = (S^{-T} X^T)^T
    const Matrix u_perp = adv - u * d.s_dot;
    d.u_dot = lu_t.solve(u_perp.transpose()).transpose();
    const Matrix v_perp = atu - v * d.s_dot.transpose();
    d.v_dot = lu.solve(v_perp.transpose()).transpose();
    return d;
}

} // namespace detail

/// U' = (I - U U^T) A' V S^{-1},  S' = U^T A' V,  V' = (I - V V^T) A'^T U S^{-T}.
///
/// Throws SingularCoreError when cond(S) exceeds `condition_cap`; the core is
/// never regularized.
inline GaugedDerivative gauged_rhs(const LowRankState& y, const Matrix& a_dot,
                                   double condition_cap = kDefaultConditionCap) {
    if (a_dot.rows() != y.rows() || a_dot.cols() != y.cols()) {
        throw DimensionError("gauged_rhs: derivative does not match the state dimensions");
    }
    require_finite(a_dot, "gauged_rhs");
    return detail::gauged_rhs_raw(y.u(), y.s(), y.v(), a_dot, condition_cap);
}

struct MidpointOptions {
    double tolerance = 1e-12;
    int max_iterations = 100;
    double condition_cap = kDefaultConditionCap;
};

/// Implicit midpoint rule on the (U, S, V) system with fixed-point iteration
/// for the stage value. A' is taken at t0 + h/2 from the path (central
/// difference over [t0, t0 + h] when the path has no derivative). The factors
/// are re-orthonormalized after the step.
inline LowRankState midpoint_step(const LowRankState& y0, const MatrixPath& path, double t0, double h,
                                  const MidpointOptions& options = {}) {
    if (path.rows != y0.rows() || path.cols != y0.cols()) {
        throw DimensionError("midpoint_step: path does not match the state dimensions");
    }
    const Matrix a_dot = path.derivative_at(t0 + 0.5 * h, h);
    require_finite(a_dot, "midpoint_step");

    Matrix u = y0.u();
    Matrix s = y0.s();
    Matrix v = y0.v();
    double increment = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        GaugedDerivative d;
        try {
            d = detail::gauged_rhs_raw(u, s, v, a_dot, options.condition_cap);
        } catch (const SingularCoreError&) {
            if (it == 1) {
                throw;
            }
            throw FixedPointDiverged(it, increment);
        }
        Matrix u_next = y0.u() + 0.5 * h * d.u_dot;
        Matrix s_next = y0.s() + 0.5 * h * d.s_dot;
        Matrix v_next = y0.v() + 0.5 * h * d.v_dot;
        increment = std::sqrt((u_next - u).squaredNorm() + (s_next - s).squaredNorm() +
                              (v_next - v).squaredNorm());
        u = std::move(u_next);
        s = std::move(s_next);
        v = std::move(v_next);
        if (!std::isfinite(increment)) {
            throw FixedPointDiverged(it, increment);
        }
        if (increment <= options.tolerance) {
            return orthonormalize_factors(2.0 * u - y0.u(), 2.0 * s - y0.s(), 2.0 * v - y0.v());
        }
    }
    throw FixedPointDiverged(options.max_iterations, increment);
}

} // namespace dlra
