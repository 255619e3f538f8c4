#pragma once

#include "dlra/splitting.hpp"

namespace dlra {

/// Retraction of Y + delta onto the rank-r manifold: one KSL step along the
/// straight path Y + t * delta, t in [0, 1].
///
/// Agrees with Y + P(Y) delta to second order in ||delta|| and is exact when
/// Y + delta itself has rank <= r.
inline LowRankState retract(const LowRankState& y, const Matrix& delta) { return ksl_step(y, delta); }

} // namespace dlra
