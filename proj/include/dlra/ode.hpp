#pragma once

#include <functional>

#include "dlra/splitting.hpp"

namespace dlra {

/// Velocity field F of a matrix ODE A' = F(A), evaluated at assembled points.
using OdeField = std::function<Matrix(const Matrix&)>;

namespace detail {

inline Matrix evaluate_field(const OdeField& f, const Matrix& y) {
    Matrix velocity = f(y);
    require_same_shape(y, velocity, "OdeField");
    return velocity;
}

} // namespace detail

/// Explicit first-order step: KSL with the increment h F(Y0).
inline LowRankState ode_ksl_step(const LowRankState& y0, const OdeField& f, double h) {
    if (!(h > 0.0)) {
        throw Error("ode_ksl_step: step size must be positive");
    }
    return ksl_step(y0, h * detail::evaluate_field(f, assemble(y0)));
}

/// Explicit second-order step. A first-order predictor Y~1 defines the
/// linear velocity B(t0 + th) = (1 - t) F(Y0) + t F(Y~1); its integral
///   A(t0 + th) = Y0 + (h/2) t (2 - t) F(Y0) + (h/2) t^2 F(Y~1)
/// supplies the three snapshots of the symmetric KSL step.
inline LowRankState ode_ksl2_step(const LowRankState& y0, const OdeField& f, double h) {
    if (!(h > 0.0)) {
        throw Error("ode_ksl2_step: step size must be positive");
    }
    const Matrix a0 = assemble(y0);
    const Matrix f0 = detail::evaluate_field(f, a0);
    const LowRankState predictor = ksl_step(y0, h * f0);
    const Matrix f1 = detail::evaluate_field(f, assemble(predictor));
    const Matrix a_half = a0 + (3.0 * h / 8.0) * f0 + (h / 8.0) * f1;
    const Matrix a1 = a0 + (h / 2.0) * f0 + (h / 2.0) * f1;
    return ksl_symmetric_step(y0, a0, a_half, a1);
}

} // namespace dlra
