#pragma once

// The limit solution on the shock polar circle: closed-form first and second
// derivatives of Upsilon driven by the wall data derivatives (B', B''), and
// independent small linear solves reproducing them from the restricted
// boundary/equation system.

#include <array>
#include <cmath>

#include "hodoshock/errors.hpp"
#include "hodoshock/model_core.hpp"
#include "hodoshock/numerics.hpp"
#include "hodoshock/wall_profile.hpp"

namespace hodoshock {

struct UpsilonJet {
  double k = 0;
  Velocity U;
  double y_u = 0, y_v = 0;
  double y_uu = 0, y_uv = 0, y_vv = 0;
};

namespace detail {
inline void check_subsonic_arc(const Velocity& U, const FlowConstants& fc) {
  if (U.u >= fc.q_bar / 3.0 - 1e-6 * fc.q_bar)
    throw SonicDegeneracy("limit solution: u too close to q_bar/3");
}
}  // namespace detail

/// Closed form (Upsilon_u, Upsilon_v) =
///   B' (3v/(q-u)^2, (q-6u)/((q-2u)(q-u))).
inline std::array<double, 2> upsilon_grad(double k, const WallProfile& W,
                                          const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  const double bp = W.Bp(k);
  return {bp * 3.0 * v / ((q - u) * (q - u)),
          bp * (q - 6.0 * u) / ((q - 2.0 * u) * (q - u))};
}

/// Numeric 2x2 solve of the restricted oblique + wall-derivative system.
inline std::array<double, 2> upsilon_grad_oracle(double k,
                                                 const WallProfile& W,
                                                 const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  std::array<std::array<double, 2>, 2> A{{
      {{(u - q) * (6.0 * u - q), 3.0 * (2.0 * u - q) * v}},
      {{2.0 * v, q - 2.0 * u}},
  }};
  std::array<double, 2> b{0.0, W.Bp(k) * q / (q - u)};
  return num::solve_dense<2>(A, b);
}

/// Closed forms for (Upsilon_uu, Upsilon_uv, Upsilon_vv), linear in B', B''.
inline std::array<double, 3> upsilon_hess(double k, const WallProfile& W,
                                          const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  const WallEval e = W.eval(k);
  const double bp = e.Bp, bpp = e.Bpp;
  const double d1 = q - u, d2 = q - 2.0 * u;
  const double d1_2 = d1 * d1, d1_3 = d1_2 * d1;
  const double yuu = -(q - 11.0 * u) * bpp / d1_3 +
                     4.0 * v * (2.0 * q - 3.0 * u) * (q + 4.0 * u) * bp /
                         (d1_3 * d2 * q);
  const double yuv =
      (5.0 * q - 22.0 * u) * v * bpp / (d1_3 * d2) +
      (3.0 * q * q * q - 16.0 * u * q * q - 52.0 * u * u * q +
       96.0 * u * u * u) *
          bp / (q * d1_2 * d2 * d2);
  const double yvv =
      (q * q - 16.0 * u * q + 44.0 * u * u) * bpp / (d1_2 * d2 * d2) -
      4.0 * v *
          (3.0 * q * q * q - 6.0 * u * q * q - 32.0 * u * u * q +
           48.0 * u * u * u) *
          bp / (q * d1_2 * d2 * d2 * d2);
  return {yuu, yuv, yvv};
}

/// Numeric 3x3 solve of the differentiated oblique condition, the
/// differentiated wall condition and the restricted interior equation, with
/// the right-hand side built from upsilon_grad.
inline std::array<double, 3> upsilon_hess_oracle(double k,
                                                 const WallProfile& W,
                                                 const FlowConstants& fc) {
  const Velocity U = limit_polar_point(k, fc);
  detail::check_subsonic_arc(U, fc);
  const double q = fc.q_bar, u = U.u, v = U.v;
  const WallEval e = W.eval(k);
  const auto [yu, yv] = upsilon_grad(k, W, fc);
  std::array<std::array<double, 3>, 3> A{{
      {{2.0 * v * (q - u) * (q - 6.0 * u),
        (q - u) * (q - 12.0 * u) * (q - 2.0 * u),
        -3.0 * (q - 2.0 * u) * (q - 2.0 * u) * v}},
      {{4.0 * v * v, 4.0 * v * (q - 2.0 * u), (q - 2.0 * u) * (q - 2.0 * u)}},
      {{(u - q) * (2.0 * u - q) / 2.0, 2.0 * u * v,
        (u + q) * (q - 2.0 * u) / 2.0}},
  }};
  const double c1 = 2.0 * u * (4.0 * u + q) / (q - 2.0 * u);
  const double c2 = 2.0 * (q + 2.0 * u) * v / (q - u);
  std::array<double, 3> b{
      -2.0 * v * (12.0 * u - 7.0 * q) * yu +
          3.0 * (8.0 * u * u - 8.0 * u * q + q * q) * yv,
      2.0 * (2.0 * u - q) * yu + 4.0 * v * yv +
          e.Bpp * q * q / ((q - u) * (q - u)) +
          e.Bp * 2.0 * q * v / ((q - u) * (q - u)),
      -c1 * yu - c2 * yv,
  };
  return num::solve_dense<3>(A, b);
}

/// Full jet of the limit solution at slope k (closed forms).
inline UpsilonJet upsilon_jet(double k, const WallProfile& W,
                              const FlowConstants& fc) {
  UpsilonJet j;
  j.k = k;
  j.U = limit_polar_point(k, fc);
  const auto g = upsilon_grad(k, W, fc);
  const auto h = upsilon_hess(k, W, fc);
  j.y_u = g[0];
  j.y_v = g[1];
  j.y_uu = h[0];
  j.y_uv = h[1];
  j.y_vv = h[2];
  return j;
}

/// First-order Taylor extension of the jet's gradient to a nearby state.
inline std::array<double, 2> frozen_grad(const UpsilonJet& j,
                                         const Velocity& U) {
  const double du = U.u - j.U.u, dv = U.v - j.U.v;
  return {j.y_u + j.y_uu * du + j.y_uv * dv,
          j.y_v + j.y_uv * du + j.y_vv * dv};
}

}  // namespace hodoshock
