#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "dlra/experiments/benchmark.hpp"

namespace dlra::csv {

/// 17 significant digits (round-trips every double); "nan"/"inf" otherwise.
inline std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
inline std::string field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

inline std::string_view status_name(StepStatus s) { return s == StepStatus::Converged ? "ok" : "diverged"; }

inline void write_error_series(std::ostream& os, std::span<const ErrorSeries> series) {
    os << "t,scheme,error_fro,best_rank_error,status\n";
    for (const ErrorSeries& s : series) {
        const std::string name = field(scheme_name(s.scheme));
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            os << format_number(s.t[i]) << ',' << name << ',' << format_number(s.error[i]) << ','
               << format_number(s.best_error[i]) << ',' << status_name(s.status[i]) << '\n';
        }
    }
}

inline std::string format_order(const OrderEstimate& e) {
    if (e.failed) {
        return "failed";
    }
    return e.p ? format_number(*e.p) : "undefined";
}

inline void write_order_table(std::ostream& os, std::span<const OrderEstimate> rows) {
    os << "scheme,p,final_error\n";
    for (const OrderEstimate& e : rows) {
        os << field(scheme_name(e.scheme)) << ',' << format_order(e) << ','
           << (e.failed ? std::string("failed") : format_number(e.final_error)) << '\n';
    }
}

inline void write_sweep(std::ostream& os, std::span<const SweepCell> cells) {
    os << "scheme,h,final_error,status\n";
    for (const SweepCell& c : cells) {
        os << field(scheme_name(c.scheme)) << ',' << format_number(c.h) << ',' << format_number(c.final_error)
           << ',' << status_name(c.status) << '\n';
    }
}

} // namespace dlra::csv
