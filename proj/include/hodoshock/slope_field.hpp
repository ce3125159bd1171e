#pragma once

// Slope machinery for the free boundary: the vectors s' (from a y-gradient)
// and s_g' (from the oblique-constrained gradient on the polar), the slope
// function F under (k, varrho) coordinates, and the closed forms of its
// varrho-derivatives on the limit circle.

#include <cmath>

#include "hodoshock/errors.hpp"
#include "hodoshock/kr_coords.hpp"
#include "hodoshock/limit_solution.hpp"
#include "hodoshock/model_core.hpp"
#include "hodoshock/wall_profile.hpp"

namespace hodoshock {

struct SlopeVector {
  double s1 = 0;
  double s2 = 0;
};

/// s' = (y_u, y_v) [[ (c^2-v^2)v, (c^2+v^2)u ], [ -(c^2-v^2)u, (c^2-u^2)v ]].
/// Parallel to the boundary direction (du, dv) selected by the y-gradient.
inline SlopeVector s_prime(const Velocity& U, double y_u, double y_v,
                           const FlowConstants& fc) {
  if (y_u == 0.0 && y_v == 0.0)
    throw ZeroGradient("s_prime: zero y-gradient");
  const double c2 = sound_speed_sq(U, fc);
  const double cv = c2 - U.v * U.v, cu = c2 - U.u * U.u;
  return {y_u * cv * U.v - y_v * cv * U.u,
          y_u * (c2 + U.v * U.v) * U.u + y_v * cu * U.v};
}

/// The jump-built slope vector on the polar (the s' of any gradient obeying
/// the oblique condition there points this way).
inline SlopeVector sg_prime(const Velocity& U, const IncomingFlow& in,
                            const FlowConstants& fc) {
  if (std::abs(polar_G(U, in, fc)) > 1e-10 * fc.q_bar * fc.q_bar)
    throw NotOnPolar("sg_prime: state is not on the polar");
  const Gradient g = polar_grad(U, in, fc);
  const double c2 = sound_speed_sq(U, fc);
  const double ju = U.u - in.u_in, jv = U.v;
  const double w = U.v * jv + U.u * ju;      // u[u] + v[v]
  const double z = U.v * ju - U.u * jv;      // v[u] - u[v]
  const double cv = c2 - U.v * U.v, cu = c2 - U.u * U.u;
  const double uv = U.u * U.v;
  return {-(g.du * w * cv + g.dv * (w * uv + c2 * z)),
          -(g.du * (w * uv - c2 * z) + g.dv * w * cu)};
}

inline double dot_grad_G(const SlopeVector& s, const Velocity& U,
                         const IncomingFlow& in, const FlowConstants& fc) {
  const Gradient g = polar_grad(U, in, fc);
  return s.s1 * g.du + s.s2 * g.dv;
}

inline double dot_grad_k(const SlopeVector& s, const Velocity& U) {
  return s.s1 / U.v - s.s2 * U.u / (U.v * U.v);
}

/// Free-boundary slope function F = -(s'.grad G)/(G_varrho (s'.grad k)) at
/// the tube point (k, varrho), for the y-gradient direction (ratio, 1).
inline double F_of(double ratio_yu_yv, const KRho& kr,
                   const FlowConstants& fc) {
  const Velocity U = uv_from_kr(kr, fc);
  const IncomingFlow in = incoming_state(kr.varrho, fc);
  const SlopeVector s = s_prime(U, ratio_yu_yv, 1.0, fc);
  const double num = dot_grad_G(s, U, in, fc);
  const double sk = dot_grad_k(s, U);
  const double mag = std::hypot(s.s1, s.s2) / U.v;
  if (std::abs(sk) < 1e-12 * mag)
    throw TangentialSlope("F_of: slope direction tangential to k-levels");
  return -num / (g_varrho(U, kr.varrho, fc) * sk);
}

/// H(k) > 0, the non-(B''/B') part of -dF_limit.
inline double H_of(double k, const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  return (2.0 * q * q + 7.0 * q * u - 12.0 * u * u) * v /
         (u * (2.0 * q + u) * (q - 2.0 * u));
}

/// h(k, eps) = (s_g'.grad G) / (varrho G_varrho (s_g'.grad k)) on the
/// varrho = eps polar, with the removable eps -> 0 limit
/// h(k, 0) = 2 (q-2u) v / (u (2q+u)).
inline double h_of(double k, double eps, const FlowConstants& fc) {
  const Velocity U0 = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U0, fc);
  if (eps < 1e-8) {
    const double q = fc.q_bar, u = U0.u, v = U0.v;
    return 2.0 * (q - 2.0 * u) * v / (u * (2.0 * q + u));
  }
  const IncomingFlow in = incoming_from_flux(eps, fc);
  const Velocity U = polar_point(k, in, fc);
  const SlopeVector sg = sg_prime(U, in, fc);
  const double num = dot_grad_G(sg, U, in, fc);
  const double den = eps * g_varrho(U, eps, fc) * dot_grad_k(sg, U);
  if (den == 0.0) throw TangentialSlope("h_of: degenerate denominator");
  return num / den;
}

/// d/d(varrho) of F at varrho = eps = 0 with the gradient and Hessian frozen
/// at the limit solution: -B''/B' - H(k) < 0.
inline double dF_limit(double k, const WallProfile& W,
                       const FlowConstants& fc) {
  return -W.dlogBp(k) - H_of(k, fc);
}

/// d/d(varrho) of the s_g'-quotient at varrho = 0: equals h(k, 0) > 0.
inline double dFg_limit(double k, const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  return 2.0 * (q - 2.0 * u) * v / (u * (2.0 * q + u));
}

/// The combined derivative dF_limit + dFg_limit in its closed form
/// -B''/B' - 5 (3q-4u) v / ((q-2u)(2q+u)) < 0.
inline double dF_minus_dFg_limit(double k, const WallProfile& W,
                                 const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  return -W.dlogBp(k) -
         5.0 * (3.0 * q - 4.0 * u) * v / ((q - 2.0 * u) * (2.0 * q + u));
}

/// Closed form of d/d(varrho) (s'.grad G) at varrho = 0 with frozen limit
/// jets: B'' (2q+u) v/(q-u)^2 + B' (2q^2+7qu-12u^2)/((q-2u)(q-u)).
inline double d_rho_sprime_dot_gradG_limit(double k, const WallProfile& W,
                                           const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  const WallEval e = W.eval(k);
  return e.Bpp * (2.0 * q + u) * v / ((q - u) * (q - u)) +
         e.Bp * (2.0 * q * q + 7.0 * q * u - 12.0 * u * u) /
             ((q - 2.0 * u) * (q - u));
}

/// Closed form of d/d(varrho) (s_g'.grad G) at varrho = 0:
/// 2 q (q-2u)(q-u).
inline double d_rho_sgprime_dot_gradG_limit(double k,
                                            const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  const double q = fc.q_bar;
  return 2.0 * q * (q - 2.0 * U.u) * (q - U.u);
}

/// s'.grad G along the varrho-family at fixed k with the y-gradient frozen
/// at the jet's first-order extension; the FD oracle for the closed form
/// above differentiates this in varrho at 0.
inline double sprime_dot_gradG_frozen(const UpsilonJet& jet, double k,
                                      double varrho,
                                      const FlowConstants& fc) {
  const Velocity U = uv_from_kr({k, varrho}, fc);
  const IncomingFlow in = incoming_state(varrho, fc);
  const auto g = frozen_grad(jet, U);
  return dot_grad_G(s_prime(U, g[0], g[1], fc), U, in, fc);
}

}  // namespace hodoshock
