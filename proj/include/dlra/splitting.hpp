#pragma once

#include <string>
#include <utility>

#include "dlra/low_rank.hpp"

namespace dlra {

// Projector-splitting steps. Each substep solves one term of
//   P(Y) Z = Z V V^T - U U^T Z V V^T + U U^T Z
// exactly for a given increment of A:
//   K-substep:  U S   += dA V     (U moves, V fixed)
//   S-substep:  S     -= U^T dA V (both fixed)
//   L-substep:  V S^T += dA^T U   (V moves, U fixed)
// None of them inverts S.

namespace detail {

inline void require_increment_shape(const LowRankState& y, const Matrix& da, const char* what) {
    if (da.rows() != y.rows() || da.cols() != y.cols()) {
        throw DimensionError(std::string(what) + ": increment is " + std::to_string(da.rows()) +
                             "x" + std::to_string(da.cols()) + ", state is " +
                             std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
    }
    require_finite(da, what);
}

/// (U1, S1) with U1 S1 = U S + dA V.
inline ThinFactorization k_substep(const Matrix& u, const Matrix& s, const Matrix& v, const Matrix& da) {
    return thin_qr(u * s + da * v);
}

inline Matrix s_substep(const Matrix& u, const Matrix& s, const Matrix& v, const Matrix& da) {
    return s - u.transpose() * da * v;
}

/// (V1, S1^T) with V1 S1^T = V S^T + dA^T U.
inline ThinFactorization l_substep(const Matrix& u, const Matrix& s, const Matrix& v, const Matrix& da) {
    return thin_qr(v * s.transpose() + da.transpose() * u);
}

} // namespace detail

/// First-order KSL step for the increment dA = A(t1) - A(t0).
inline LowRankState ksl_step(const LowRankState& y0, const Matrix& delta_a) {
    detail::require_increment_shape(y0, delta_a, "ksl_step");
    const Matrix& v0 = y0.v();
    ThinFactorization k = detail::k_substep(y0.u(), y0.s(), v0, delta_a);
    const Matrix s_tilde = detail::s_substep(k.q, k.r_factor, v0, delta_a);
    ThinFactorization l = detail::l_substep(k.q, s_tilde, v0, delta_a);
    return LowRankState(std::move(k.q), l.r_factor.transpose(), std::move(l.q));
}

/// Second-order symmetrized KSL step from the snapshots A(t0), A(t0 + h/2),
/// A(t0 + h): a K/S half step, a full L step, then the S/K half step in
/// reverse order.
inline LowRankState ksl_symmetric_step(const LowRankState& y0, const Matrix& a0, const Matrix& a_half,
                                       const Matrix& a1) {
    detail::require_increment_shape(y0, a0, "ksl_symmetric_step");
    detail::require_increment_shape(y0, a_half, "ksl_symmetric_step");
    detail::require_increment_shape(y0, a1, "ksl_symmetric_step");
    const Matrix first = a_half - a0;
    const Matrix second = a1 - a_half;
    const Matrix full = a1 - a0;
    const Matrix& v0 = y0.v();

    ThinFactorization k_half = detail::k_substep(y0.u(), y0.s(), v0, first);
    const Matrix& u_half = k_half.q;
    const Matrix s_tilde0 = detail::s_substep(u_half, k_half.r_factor, v0, first);
    ThinFactorization l = detail::l_substep(u_half, s_tilde0, v0, full);
    const Matrix& v1 = l.q;
    const Matrix s_tilde_half = detail::s_substep(u_half, l.r_factor.transpose(), v1, second);
    ThinFactorization k1 = detail::k_substep(u_half, s_tilde_half, v1, second);
    return LowRankState(std::move(k1.q), std::move(k1.r_factor), std::move(l.q));
}

/// First-order KLS step: K, then L, then S. Lacks the exactness property of
/// the KSL ordering and serves as a comparison scheme.
inline LowRankState kls_step(const LowRankState& y0, const Matrix& delta_a) {
    detail::require_increment_shape(y0, delta_a, "kls_step");
    ThinFactorization k = detail::k_substep(y0.u(), y0.s(), y0.v(), delta_a);
    ThinFactorization l = detail::l_substep(k.q, k.r_factor, y0.v(), delta_a);
    Matrix s1 = detail::s_substep(k.q, l.r_factor.transpose(), l.q, delta_a);
    return LowRankState(std::move(k.q), std::move(s1), std::move(l.q));
}

/// Strang composition of KLS with its adjoint: K and L half steps, a full S
/// step, then L and K half steps.
inline LowRankState kls_symmetric_step(const LowRankState& y0, const Matrix& a0, const Matrix& a_half,
                                       const Matrix& a1) {
    detail::require_increment_shape(y0, a0, "kls_symmetric_step");
    detail::require_increment_shape(y0, a_half, "kls_symmetric_step");
    detail::require_increment_shape(y0, a1, "kls_symmetric_step");
    const Matrix first = a_half - a0;
    const Matrix second = a1 - a_half;
    const Matrix full = a1 - a0;

    ThinFactorization k_half = detail::k_substep(y0.u(), y0.s(), y0.v(), first);
    const Matrix& u_half = k_half.q;
    ThinFactorization l_half = detail::l_substep(u_half, k_half.r_factor, y0.v(), first);
    const Matrix& v_half = l_half.q;
    const Matrix s_mid = detail::s_substep(u_half, l_half.r_factor.transpose(), v_half, full);
    ThinFactorization l1 = detail::l_substep(u_half, s_mid, v_half, second);
    ThinFactorization k1 = detail::k_substep(u_half, l1.r_factor.transpose(), l1.q, second);
    return LowRankState(std::move(k1.q), std::move(k1.r_factor), std::move(l1.q));
}

} // namespace dlra
