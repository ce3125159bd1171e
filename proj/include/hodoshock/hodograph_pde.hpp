#pragma once

// Coefficients of the hodograph-plane equation for y (gamma = 2 form), the
// oblique boundary coefficients (I, J) on the shock polar, and the recovery
// of the x-gradient from the y-gradient.

#include <cmath>

#include "hodoshock/errors.hpp"
#include "hodoshock/model_core.hpp"

namespace hodoshock {

struct PdeCoeffs {
  double a_uu = 0;  // coefficient of y_uu
  double a_uv = 0;  // full coefficient of y_uv (equals 2uv)
  double a_vv = 0;  // coefficient of y_vv
  double b_u = 0;   // C1
  double b_v = 0;   // C2
};

/// Discriminant (a_uv/2)^2 - a_uu a_vv of the principal symbol; equals
/// -c^2 (c^2 - q^2), negative exactly on subsonic states.
inline double ellipticity_discriminant(const PdeCoeffs& c) {
  const double b = 0.5 * c.a_uv;
  return b * b - c.a_uu * c.a_vv;
}

/// Interior equation (c^2-v^2) y_uu + 2uv y_uv + (c^2-u^2) y_vv
///                   + C1 y_u + C2 y_v = 0 for gamma = 2.
inline PdeCoeffs interior_coeffs(const Velocity& U, const FlowConstants& fc,
                                 double tol_scale = 1e-12) {
  const double c2 = sound_speed_sq(U, fc);
  const double u = U.u, v = U.v;
  const double auu = c2 - v * v;
  if (std::abs(auu) < tol_scale * fc.q_bar * fc.q_bar)
    throw DegenerateCoefficient("interior_coeffs: c^2 - v^2 vanishes");
  PdeCoeffs out;
  out.a_uu = auu;
  out.a_uv = 2.0 * u * v;
  out.a_vv = c2 - u * u;
  out.b_u = (4.0 * v * v + 2.0 * c2) / auu * u;
  out.b_v = ((2.0 * c2 - u * u - v * v) - 2.0 * (u * u - v * v)) / auu * v;
  return out;
}

struct ObliqueCoeffs {
  double I = 0;  // coefficient of y_u
  double J = 0;  // coefficient of y_v
};

/// Oblique condition I y_u + J y_v = 0 on the shock polar, built from the
/// velocity jumps [u] = u - u_in, [v] = v.
inline ObliqueCoeffs shock_oblique_coeffs(const Velocity& U,
                                          const IncomingFlow& in,
                                          const FlowConstants& fc) {
  const double g = polar_G(U, in, fc);
  if (std::abs(g) > 1e-10 * fc.q_bar * fc.q_bar)
    throw NotOnPolar("shock_oblique_coeffs: state is not on the polar");
  const Gradient dg = polar_grad(U, in, fc);
  const double c2 = sound_speed_sq(U, fc);
  const double ju = U.u - in.u_in, jv = U.v;
  const double cv = c2 - U.v * U.v, cu = c2 - U.u * U.u;
  ObliqueCoeffs o;
  o.I = dg.du * cv * ju - dg.dv * cv * jv + dg.dv * ju * (2.0 * U.u * U.v);
  o.J = dg.du * cv * jv + dg.dv * cu * ju;
  return o;
}

/// Equivalent oblique condition built from the mass-flux jumps
/// [rho u] = rho u - eps and [rho v] = rho v.
inline ObliqueCoeffs oblique_alt_form(const Velocity& U,
                                      const IncomingFlow& in,
                                      const FlowConstants& fc) {
  const double g = polar_G(U, in, fc);
  if (std::abs(g) > 1e-10 * fc.q_bar * fc.q_bar)
    throw NotOnPolar("oblique_alt_form: state is not on the polar");
  const Gradient dg = polar_grad(U, in, fc);
  const double c2 = sound_speed_sq(U, fc);
  const double rho = density(U, fc);
  const double jru = rho * U.u - in.eps, jrv = rho * U.v;
  const double cv = c2 - U.v * U.v, cu = c2 - U.u * U.u;
  ObliqueCoeffs o;
  o.I = dg.du * cv * jrv + dg.dv * cv * jru + dg.dv * jrv * (2.0 * U.u * U.v);
  o.J = -dg.du * cv * jru + dg.dv * cu * jrv;
  return o;
}

struct XGradient {
  double x_u = 0;
  double x_v = 0;
};

/// x_u = -2uv/(c^2-v^2) y_u - (c^2-u^2)/(c^2-v^2) y_v,  x_v = y_u.
inline XGradient x_gradient_from_y(const Velocity& U, double y_u, double y_v,
                                   const FlowConstants& fc,
                                   double tol_scale = 1e-12) {
  const double c2 = sound_speed_sq(U, fc);
  const double cv = c2 - U.v * U.v;
  if (std::abs(cv) < tol_scale * fc.q_bar * fc.q_bar)
    throw DegenerateCoefficient("x_gradient_from_y: c^2 - v^2 vanishes");
  XGradient x;
  x.x_u = -2.0 * U.u * U.v / cv * y_u - (c2 - U.u * U.u) / cv * y_v;
  x.x_v = y_u;
  return x;
}

}  // namespace hodoshock
