#pragma once

#include <random>

#include "dlra/low_rank.hpp"

namespace dlra::testing {

using Rng = std::mt19937_64;

inline Matrix gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            a(i, j) = normal(rng);
        }
    }
    return a;
}

inline Matrix orthonormal(Index rows, Index cols, Rng& rng) { return thin_qr(gaussian(rows, cols, rng)).q; }

inline Matrix skew(Index n, Rng& rng, double scale = 1.0) {
    const Matrix g = gaussian(n, n, rng);
    return 0.5 * scale * (g - g.transpose());
}

inline LowRankState random_state(Index m, Index n, Index r, Rng& rng) {
    return LowRankState(orthonormal(m, r, rng), gaussian(r, r, rng), orthonormal(n, r, rng));
}

inline Matrix random_rank(Index m, Index n, Index r, Rng& rng) { return gaussian(m, r, rng) * gaussian(r, n, rng); }

} // namespace dlra::testing
