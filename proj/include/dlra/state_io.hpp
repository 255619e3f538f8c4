#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dlra/low_rank.hpp"

namespace dlra {

// Text checkpoint of a LowRankState:
//
//   dlra-lowrank 1
//   <m> <n> <r>
//   U            followed by m rows of r numbers
//   S            followed by r rows of r numbers
//   V            followed by n rows of r numbers
//
// Numbers are written with 17 significant digits, so reading back restores
// every factor bit for bit.

namespace detail {

inline void write_block(std::ostream& os, const char* tag, const Matrix& a) {
    os << tag << '\n';
    char buf[32];
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            os << (j == 0 ? "" : " ") << buf;
        }
        os << '\n';
    }
}

inline Matrix read_block(std::istream& is, const char* tag, Index rows, Index cols) {
    std::string word;
    if (!(is >> word) || word != tag) {
        throw ParseError(std::string("expected block '") + tag + "'");
    }
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            if (!(is >> word)) {
                throw ParseError(std::string("truncated block '") + tag + "'");
            }
            std::size_t used = 0;
            try {
                a(i, j) = std::stod(word, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != word.size()) {
                throw ParseError("bad number '" + word + "' in block '" + tag + "'");
            }
        }
    }
    return a;
}

} // namespace detail

inline void write_state(std::ostream& os, const LowRankState& y) {
    os << "dlra-lowrank 1\n" << y.rows() << ' ' << y.cols() << ' ' << y.rank() << '\n';
    detail::write_block(os, "U", y.u());
    detail::write_block(os, "S", y.s());
    detail::write_block(os, "V", y.v());
}

inline LowRankState read_state(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "dlra-lowrank" || version != 1) {
        throw ParseError("not a dlra-lowrank version 1 stream");
    }
    Index m = 0, n = 0, r = 0;
    if (!(is >> m >> n >> r) || m < 1 || n < 1 || r < 1) {
        throw ParseError("bad dimension header");
    }
    Matrix u = detail::read_block(is, "U", m, r);
    Matrix s = detail::read_block(is, "S", r, r);
    Matrix v = detail::read_block(is, "V", n, r);
    return LowRankState(std::move(u), std::move(s), std::move(v));
}

inline std::string to_string(const LowRankState& y) {
    std::ostringstream os;
    write_state(os, y);
    return os.str();
}

inline LowRankState state_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_state(is);
}

} // namespace dlra
