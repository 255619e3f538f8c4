#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "dlra/gauged.hpp"
#include "dlra/splitting.hpp"

namespace dlra {

enum class SchemeId { KSL, KSL2, KLS, KLS2, MIDPOINT };

inline constexpr std::array<SchemeId, 5> kAllSchemes = {SchemeId::KSL, SchemeId::KSL2, SchemeId::KLS,
                                                        SchemeId::KLS2, SchemeId::MIDPOINT};

inline std::string_view scheme_name(SchemeId id) {
    switch (id) {
    case SchemeId::KSL: return "ksl";
    case SchemeId::KSL2: return "ksl2";
    case SchemeId::KLS: return "kls";
    case SchemeId::KLS2: return "kls2";
    case SchemeId::MIDPOINT: return "midpoint";
    }
    return "unknown";
}

inline std::optional<SchemeId> parse_scheme(std::string_view name) {
    for (SchemeId id : kAllSchemes) {
        if (scheme_name(id) == name) {
            return id;
        }
    }
    return std::nullopt;
}

enum class StepStatus { Converged, Diverged };

struct IntegrationResult {
    LowRankState state;          // last successfully computed state
    double t = 0.0;              // time of `state`
    Index steps_taken = 0;
    StepStatus status = StepStatus::Converged;
    std::string failure;         // diagnostic when status == Diverged

    bool ok() const { return status == StepStatus::Converged; }
};

using StepObserver = std::function<void(double t, const LowRankState& y)>;

/// Number of uniform steps of size h covering [t0, t_end]; throws unless the
/// interval is an integer multiple of h to within 1e-9.
inline Index uniform_step_count(double t0, double t_end, double h) {
    if (!(h > 0.0)) {
        throw ConfigError("step size must be positive");
    }
    if (t_end < t0) {
        throw ConfigError("t_end precedes t0");
    }
    const double ratio = (t_end - t0) / h;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-9) {
        throw ConfigError("step size does not divide the integration interval");
    }
    return static_cast<Index>(steps);
}

/// One step of `scheme` from t0 to t0 + h along `path`.
inline LowRankState scheme_step(SchemeId scheme, const LowRankState& y0, const MatrixPath& path, double t0,
                                double h, const MidpointOptions& midpoint = {}) {
    switch (scheme) {
    case SchemeId::KSL: return ksl_step(y0, path(t0 + h) - path(t0));
    case SchemeId::KLS: return kls_step(y0, path(t0 + h) - path(t0));
    case SchemeId::KSL2: return ksl_symmetric_step(y0, path(t0), path(t0 + 0.5 * h), path(t0 + h));
    case SchemeId::KLS2: return kls_symmetric_step(y0, path(t0), path(t0 + 0.5 * h), path(t0 + h));
    case SchemeId::MIDPOINT: return midpoint_step(y0, path, t0, h, midpoint);
    }
    throw Error("unknown scheme");
}

/// Uniform stepping of `scheme` over [t0, t_end]. The observer sees every
/// accepted step. Midpoint breakdowns (FixedPointDiverged, SingularCoreError)
/// end the run and are recorded in the result; other errors propagate.
inline IntegrationResult integrate(SchemeId scheme, const LowRankState& y0, const MatrixPath& path, double t0,
                                   double t_end, double h, const StepObserver& observer = {},
                                   const MidpointOptions& midpoint = {}) {
    if (path.rows != y0.rows() || path.cols != y0.cols()) {
        throw DimensionError("integrate: path does not match the state dimensions");
    }
    const Index steps = uniform_step_count(t0, t_end, h);
    IntegrationResult result{y0, t0};
    if (steps == 0) {
        return result;
    }
    const double dt = (t_end - t0) / static_cast<double>(steps);
    auto node = [&](Index k) { return k == steps ? t_end : t0 + static_cast<double>(k) * dt; };

    Matrix a_prev = scheme == SchemeId::MIDPOINT ? Matrix() : path(t0);
    for (Index k = 0; k < steps; ++k) {
        const double ta = node(k);
        const double tb = node(k + 1);
        const double step = tb - ta;
        switch (scheme) {
        case SchemeId::KSL:
        case SchemeId::KLS: {
            Matrix a_next = path(tb);
            const Matrix delta = a_next - a_prev;
            result.state = scheme == SchemeId::KSL ? ksl_step(result.state, delta) : kls_step(result.state, delta);
            a_prev = std::move(a_next);
            break;
        }
        case SchemeId::KSL2:
        case SchemeId::KLS2: {
            const Matrix a_half = path(ta + 0.5 * step);
            Matrix a_next = path(tb);
            result.state = scheme == SchemeId::KSL2 ? ksl_symmetric_step(result.state, a_prev, a_half, a_next)
                                                    : kls_symmetric_step(result.state, a_prev, a_half, a_next);
            a_prev = std::move(a_next);
            break;
        }
        case SchemeId::MIDPOINT:
            try {
                result.state = midpoint_step(result.state, path, ta, step, midpoint);
            } catch (const FixedPointDiverged& e) {
                result.status = StepStatus::Diverged;
                result.failure = e.what();
                return result;
            } catch (const SingularCoreError& e) {
                result.status = StepStatus::Diverged;
                result.failure = e.what();
                return result;
            }
            break;
        }
        result.t = tb;
        result.steps_taken = k + 1;
        if (observer) {
            observer(tb, result.state);
        }
    }
    return result;
}

} // namespace dlra
