#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlra/experiments/benchmark.hpp"
#include "dlra/experiments/csv.hpp"

namespace dlra::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;     // bad flags/config, unreadable or unwritable files
inline constexpr int kExitDiverged = 2;  // some scheme broke down; data was still written

enum class Mode { Run, Order, Sweep };

inline std::string_view mode_name(Mode m) {
    switch (m) {
    case Mode::Run: return "run";
    case Mode::Order: return "order";
    case Mode::Sweep: return "sweep";
    }
    return "run";
}

inline Mode parse_mode(const std::string& text) {
    if (text == "run") return Mode::Run;
    if (text == "order") return Mode::Order;
    if (text == "sweep") return Mode::Sweep;
    throw ConfigError("unknown mode '" + text + "' (expected run, order or sweep)");
}

struct RunConfig {
    std::vector<SchemeId> schemes{SchemeId::KSL};
    Index rank = 10;
    double eps = 1e-3;
    std::vector<double> h{1e-3};
    std::uint64_t seed = 1;
    Index m = 100;
    Index n = 100;
    Index core_rank = 10;
    double t_end = 1.0;
    std::string out = "-";
    Mode mode = Mode::Run;
};

/// Accepts scheme names case-insensitively; "all" expands to every scheme.
inline std::vector<SchemeId> parse_schemes(const std::vector<std::string>& names) {
    std::vector<SchemeId> out;
    for (std::string name : names) {
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (name == "all") {
            out.insert(out.end(), kAllSchemes.begin(), kAllSchemes.end());
            continue;
        }
        const std::optional<SchemeId> id = parse_scheme(name);
        if (!id) {
            throw ConfigError("unknown scheme '" + name + "'");
        }
        out.push_back(*id);
    }
    if (out.empty()) {
        throw ConfigError("no scheme selected");
    }
    return out;
}

inline ProblemSpec problem_spec(const RunConfig& c) {
    ProblemSpec spec;
    spec.m = c.m;
    spec.n = c.n;
    spec.core_rank = c.core_rank;
    spec.eps = c.eps;
    spec.seed = c.seed;
    spec.t_end = c.t_end;
    return spec;
}

inline void validate(const RunConfig& c) {
    validate(problem_spec(c));
    if (c.rank < 1 || c.rank > std::min(c.m, c.n)) {
        throw ConfigError("rank must lie in [1, min(m, n)]");
    }
    if (c.schemes.empty()) {
        throw ConfigError("no scheme selected");
    }
    if (c.h.empty()) {
        throw ConfigError("no step size given");
    }
    if (c.mode != Mode::Sweep && c.h.size() != 1) {
        throw ConfigError("mode " + std::string(mode_name(c.mode)) + " takes exactly one step size");
    }
    for (double h : c.h) {
        uniform_step_count(0.0, c.t_end, h);
        if (c.mode == Mode::Order) {
            uniform_step_count(0.0, c.t_end, h / 4.0);
        }
    }
}

/// Overlays the keys of a JSON config object onto `c`.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("config file must contain a JSON object");
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "scheme" || key == "schemes") {
                c.schemes = parse_schemes(value.is_array() ? value.get<std::vector<std::string>>()
                                                           : std::vector<std::string>{value.get<std::string>()});
            } else if (key == "rank") {
                c.rank = value.get<Index>();
            } else if (key == "eps") {
                c.eps = value.get<double>();
            } else if (key == "h") {
                c.h = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
            } else if (key == "seed") {
                c.seed = value.get<std::uint64_t>();
            } else if (key == "m") {
                c.m = value.get<Index>();
            } else if (key == "n") {
                c.n = value.get<Index>();
            } else if (key == "core_rank") {
                c.core_rank = value.get<Index>();
            } else if (key == "t_end") {
                c.t_end = value.get<double>();
            } else if (key == "out") {
                c.out = value.get<std::string>();
            } else if (key == "mode") {
                c.mode = parse_mode(value.get<std::string>());
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    apply_json(base, j);
    return base;
}

/// Writes one error series per scheme. Returns kExitDiverged if any broke down.
inline int cmd_run(const RunConfig& c, std::ostream& out) {
    const Problem problem(problem_spec(c));
    std::vector<ErrorSeries> series;
    bool diverged = false;
    for (SchemeId s : c.schemes) {
        series.push_back(run_error_series(s, problem, c.rank, c.h.front()));
        diverged = diverged || series.back().diverged();
    }
    csv::write_error_series(out, series);
    return diverged ? kExitDiverged : kExitOk;
}

inline int cmd_order(const RunConfig& c, std::ostream& out) {
    const Problem problem(problem_spec(c));
    std::vector<OrderEstimate> rows;
    bool failed = false;
    for (SchemeId s : c.schemes) {
        rows.push_back(estimate_order(s, problem, c.rank, c.h.front()));
        failed = failed || rows.back().failed;
    }
    csv::write_order_table(out, rows);
    return failed ? kExitDiverged : kExitOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
    const Problem problem(problem_spec(c));
    const std::vector<SweepCell> cells = sweep_stepsizes(c.schemes, problem, c.rank, c.h);
    csv::write_sweep(out, cells);
    const bool failed = std::any_of(cells.begin(), cells.end(),
                                    [](const SweepCell& cell) { return cell.status != StepStatus::Converged; });
    return failed ? kExitDiverged : kExitOk;
}

inline int dispatch(const RunConfig& c, std::ostream& out) {
    switch (c.mode) {
    case Mode::Run: return cmd_run(c, out);
    case Mode::Order: return cmd_order(c, out);
    case Mode::Sweep: return cmd_sweep(c, out);
    }
    return kExitUsage;
}

/// Parses flags (overriding an optional --config JSON file), runs the
/// selected mode and writes CSV to --out ("-" for `out`).
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamical low-rank integrators: projector splitting benchmark"};
    app.name("dlra");
    app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h

    std::vector<std::string> scheme_names;
    Index rank = 0;
    double eps = 0.0;
    std::vector<double> steps;
    std::uint64_t seed = 0;
    Index m = 0;
    Index n = 0;
    Index core_rank = 0;
    double t_end = 0.0;
    std::string out_path;
    std::string config_path;
    std::string mode;

    auto* o_scheme = app.add_option("--scheme", scheme_names, "ksl, ksl2, kls, kls2, midpoint or all (repeatable)")
                         ->delimiter(',');
    auto* o_rank = app.add_option("--rank", rank, "approximation rank r");
    auto* o_eps = app.add_option("--eps", eps, "perturbation level");
    auto* o_h = app.add_option("--h", steps, "step size (repeatable for sweeps)")->delimiter(',');
    auto* o_seed = app.add_option("--seed", seed, "generator seed");
    auto* o_m = app.add_option("--m", m, "rows");
    auto* o_n = app.add_option("--n", n, "columns");
    auto* o_core = app.add_option("--core-rank", core_rank, "rank of the unperturbed core");
    auto* o_tend = app.add_option("--t-end", t_end, "final time");
    auto* o_out = app.add_option("--out", out_path, "output CSV path, '-' for stdout");
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    auto* o_mode = app.add_option("--mode", mode, "run, order or sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "dlra: " << e.what() << '\n';
        return kExitUsage;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) {
            config = load_config_file(config_path, config);
        }
        if (o_scheme->count()) config.schemes = parse_schemes(scheme_names);
        if (o_rank->count()) config.rank = rank;
        if (o_eps->count()) config.eps = eps;
        if (o_h->count()) config.h = steps;
        if (o_seed->count()) config.seed = seed;
        if (o_m->count()) config.m = m;
        if (o_n->count()) config.n = n;
        if (o_core->count()) config.core_rank = core_rank;
        if (o_tend->count()) config.t_end = t_end;
        if (o_out->count()) config.out = out_path;
        if (o_mode->count()) config.mode = parse_mode(mode);
        validate(config);
    } catch (const Error& e) {
        err << "dlra: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (config.out.empty() || config.out == "-") {
            return dispatch(config, out);
        }
        std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "dlra: cannot open '" << config.out << "' for writing\n";
            return kExitUsage;
        }
        const int code = dispatch(config, file);
        file.flush();
        if (!file) {
            err << "dlra: write to '" << config.out << "' failed\n";
            return kExitUsage;
        }
        return code;
    } catch (const std::exception& e) {
        err << "dlra: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace dlra::cli
