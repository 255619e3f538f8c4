#pragma once

#include <functional>
#include <utility>

#include "dlra/matrix_kernels.hpp"

namespace dlra {

/// A time-dependent matrix t -> A(t), optionally with its derivative.
///
/// The splitting integrators only consume increments A(t1) - A(t0); the
/// derivative is needed by the gauged (midpoint) baseline alone.
struct MatrixPath {
    using Evaluator = std::function<Matrix(double)>;

    Index rows = 0;
    Index cols = 0;
    Evaluator value;
    Evaluator derivative;  // may be empty

    bool has_derivative() const { return static_cast<bool>(derivative); }

    Matrix operator()(double t) const { return value(t); }

    /// Analytic derivative when present, central difference with step
    /// `delta` otherwise.
    Matrix derivative_at(double t, double delta) const {
        if (derivative) {
            return derivative(t);
        }
        return (value(t + 0.5 * delta) - value(t - 0.5 * delta)) / delta;
    }
};

/// A(t) = base + t * direction.
inline MatrixPath affine_path(Matrix base, Matrix direction) {
    require_same_shape(base, direction, "affine_path");
    MatrixPath path;
    path.rows = base.rows();
    path.cols = base.cols();
    path.value = [base, direction](double t) -> Matrix { return base + t * direction; };
    path.derivative = [direction](double) -> Matrix { return direction; };
    return path;
}

} // namespace dlra
