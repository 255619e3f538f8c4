#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlra/experiments/problem.hpp"
#include "dlra/integrate.hpp"

namespace dlra {

/// Errors of one trajectory at every step node.
struct ErrorSeries {
    SchemeId scheme = SchemeId::KSL;
    Index rank = 0;
    double h = 0.0;
    std::vector<double> t;
    std::vector<double> error;       // ||Y(t_n) - A(t_n)||_F, NaN after a breakdown
    std::vector<double> best_error;  // ||best_r(A(t_n)) - A(t_n)||_F
    std::vector<StepStatus> status;
    std::string failure;

    bool diverged() const { return !failure.empty(); }
    double final_error() const { return error.empty() ? std::numeric_limits<double>::quiet_NaN() : error.back(); }
};

inline double best_rank_error(const Matrix& a, Index rank) { return tail_norm(singular_values(a), rank); }

inline void require_rank(const ProblemSpec& spec, Index rank) {
    if (rank < 1 || rank > std::min(spec.m, spec.n)) {
        throw ConfigError("rank must lie in [1, min(m, n)]");
    }
}

/// Integrates `scheme` from the truncated SVD of A(0) over [0, t_end] and
/// records both error curves at every node.
inline ErrorSeries run_error_series(SchemeId scheme, const Problem& problem, Index rank, double h) {
    const ProblemSpec& spec = problem.spec();
    require_rank(spec, rank);
    const MatrixPath path = problem.frame_path();
    const Index steps = uniform_step_count(0.0, spec.t_end, h);

    ErrorSeries out;
    out.scheme = scheme;
    out.rank = rank;
    out.h = h;
    out.t.reserve(steps + 1);
    auto record = [&](double t, const Matrix& a, double err, StepStatus st) {
        out.t.push_back(t);
        out.error.push_back(err);
        out.best_error.push_back(best_rank_error(a, rank));
        out.status.push_back(st);
    };

    const Matrix a0 = path(0.0);
    const LowRankState y0 = truncate_to_rank(a0, rank);
    record(0.0, a0, (assemble(y0) - a0).norm(), StepStatus::Converged);

    const IntegrationResult result = integrate(scheme, y0, path, 0.0, spec.t_end, h, [&](double t, const LowRankState& y) {
        const Matrix a = path(t);
        record(t, a, (assemble(y) - a).norm(), StepStatus::Converged);
    });
    if (!result.ok()) {
        out.failure = result.failure;
        const double dt = spec.t_end / static_cast<double>(steps);
        for (Index k = result.steps_taken + 1; k <= steps; ++k) {
            const double t = k == steps ? spec.t_end : static_cast<double>(k) * dt;
            record(t, path(t), std::numeric_limits<double>::quiet_NaN(), StepStatus::Diverged);
        }
    }
    return out;
}

inline ErrorSeries run_error_series(SchemeId scheme, const ProblemSpec& spec, Index rank, double h) {
    return run_error_series(scheme, Problem(spec), rank, h);
}

/// Runge-rule order p = log2(||y(h) - y(h/2)|| / ||y(h/2) - y(h/4)||).
/// Undefined when either difference vanishes.
inline std::optional<double> runge_order(const Matrix& y_h, const Matrix& y_h2, const Matrix& y_h4) {
    const double coarse = (y_h - y_h2).norm();
    const double fine = (y_h2 - y_h4).norm();
    if (coarse == 0.0 || fine == 0.0) {
        return std::nullopt;
    }
    return std::log2(coarse / fine);
}

struct OrderEstimate {
    SchemeId scheme = SchemeId::KSL;
    std::optional<double> p;
    std::array<double, 3> step_sizes{};
    std::array<double, 3> final_errors{};  // ||Y(t_end) - A(t_end)||_F at h, h/2, h/4
    double final_error = std::numeric_limits<double>::quiet_NaN();  // at h
    bool failed = false;
    std::string failure;
};

/// Final state of `scheme` integrated from the truncated SVD of A(0).
inline IntegrationResult final_state(SchemeId scheme, const Problem& problem, Index rank, double h) {
    require_rank(problem.spec(), rank);
    const MatrixPath path = problem.frame_path();
    const LowRankState y0 = truncate_to_rank(path(0.0), rank);
    return integrate(scheme, y0, path, 0.0, problem.spec().t_end, h);
}

inline OrderEstimate estimate_order(SchemeId scheme, const Problem& problem, Index rank, double h) {
    const double t_end = problem.spec().t_end;
    OrderEstimate out;
    out.scheme = scheme;
    out.step_sizes = {h, h / 2.0, h / 4.0};
    const Matrix a_end = problem.frame_value(t_end);
    std::vector<Matrix> finals;
    for (std::size_t i = 0; i < out.step_sizes.size(); ++i) {
        IntegrationResult r = final_state(scheme, problem, rank, out.step_sizes[i]);
        if (!r.ok()) {
            out.failed = true;
            out.failure = r.failure;
            out.final_errors[i] = std::numeric_limits<double>::quiet_NaN();
            out.final_error = std::numeric_limits<double>::quiet_NaN();
            return out;
        }
        finals.push_back(assemble(r.state));
        out.final_errors[i] = (finals.back() - a_end).norm();
    }
    out.final_error = out.final_errors[0];
    out.p = runge_order(finals[0], finals[1], finals[2]);
    return out;
}

inline OrderEstimate estimate_order(SchemeId scheme, const ProblemSpec& spec, Index rank, double h) {
    return estimate_order(scheme, Problem(spec), rank, h);
}

struct SweepCell {
    SchemeId scheme = SchemeId::KSL;
    double h = 0.0;
    double final_error = std::numeric_limits<double>::quiet_NaN();
    StepStatus status = StepStatus::Converged;
};

/// Final-time error for every (scheme, h) pair, ordered scheme-major in the
/// order the arguments were given.
inline std::vector<SweepCell> sweep_stepsizes(std::span<const SchemeId> schemes, const Problem& problem,
                                              Index rank, std::span<const double> step_sizes) {
    const double t_end = problem.spec().t_end;
    for (double h : step_sizes) {
        uniform_step_count(0.0, t_end, h);
    }
    const Matrix a_end = problem.frame_value(t_end);
    std::vector<SweepCell> cells;
    cells.reserve(schemes.size() * step_sizes.size());
    for (SchemeId scheme : schemes) {
        for (double h : step_sizes) {
            SweepCell cell{scheme, h};
            const IntegrationResult r = final_state(scheme, problem, rank, h);
            if (r.ok()) {
                cell.final_error = (assemble(r.state) - a_end).norm();
            } else {
                cell.status = StepStatus::Diverged;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

inline std::vector<SweepCell> sweep_stepsizes(std::span<const SchemeId> schemes, const ProblemSpec& spec,
                                              Index rank, std::span<const double> step_sizes) {
    return sweep_stepsizes(schemes, Problem(spec), rank, step_sizes);
}

} // namespace dlra
