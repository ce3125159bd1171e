#pragma once

// Gas relations for the gamma = 2 potential flow, the incoming-flow
// parameterization by mass flux, and the shock polar G(u,v,eps) = 0 with its
// gradients and point constructors.

#include <cmath>
#include <string>

#include "hodoshock/errors.hpp"

namespace hodoshock {

struct FlowConstants {
  double q_bar = 1.0;   // limit speed
  double gamma = 2.0;   // fixed; other values rejected

  FlowConstants() = default;
  explicit FlowConstants(double q_bar_, double gamma_ = 2.0)
      : q_bar(q_bar_), gamma(gamma_) {
    if (!(q_bar > 0.0))
      throw BadState("FlowConstants: q_bar must be positive");
    if (gamma != 2.0)
      throw BadState("FlowConstants: only gamma = 2 is supported");
  }

  /// Largest incoming mass flux (1/4)(q_bar^2 - u^2)u over u in (0, q_bar).
  /// The maximizer is u = q_bar/sqrt(3).
  double eps_max() const {
    const double us = q_bar / std::sqrt(3.0);
    return 0.25 * (q_bar * q_bar - us * us) * us;
  }

  /// Flux coordinate range in which the Newton basins of the (k, varrho)
  /// machinery are trusted.
  double varrho_cap() const { return 0.2 * eps_max(); }
};

struct Velocity {
  double u = 0.0;
  double v = 0.0;
  double speed_sq() const { return u * u + v * v; }
  double speed() const { return std::sqrt(speed_sq()); }
};

struct IncomingFlow {
  double eps = 0.0;     // mass flux rho_in * u_in
  double u_in = 0.0;    // incoming horizontal velocity
  double rho_in = 0.0;  // incoming density
};

/// rho = (q_bar^2 - q^2)/4 for gamma = 2.
inline double density(const Velocity& U, const FlowConstants& fc) {
  const double r = 0.25 * (fc.q_bar * fc.q_bar - U.speed_sq());
  if (!(r > 0.0))
    throw NonPhysicalState("density: speed at or above limit speed");
  return r;
}

/// c^2 = (q_bar^2 - q^2)/2 = 2 rho for gamma = 2.
inline double sound_speed_sq(const Velocity& U, const FlowConstants& fc) {
  return 2.0 * density(U, fc);
}

/// d(u_in)/d(flux) from implicit differentiation of (1/4)(q^2-u^2)u = flux.
inline double ubar_prime(double u_in, const FlowConstants& fc) {
  return 4.0 / (fc.q_bar * fc.q_bar - 3.0 * u_in * u_in);
}

inline double ubar_second(double u_in, const FlowConstants& fc) {
  const double d = fc.q_bar * fc.q_bar - 3.0 * u_in * u_in;
  return 96.0 * u_in / (d * d * d);
}

namespace detail {
// Root of (1/4)(q^2 - u^2)u = flux nearest u = q_bar. Accepts small negative
// flux (u slightly above q_bar); used for the signed varrho coordinate.
inline double ubar_root(double flux, const FlowConstants& fc,
                        double tol_scale = 1e-13) {
  const double q = fc.q_bar;
  if (flux == 0.0) return q;
  double u = q;
  const double tol = tol_scale * q * q * q;
  int polish = 2;  // extra quadratic steps once converged, to kill jitter
  for (int it = 0; it < 80; ++it) {
    const double f = 0.25 * (q * q - u * u) * u - flux;
    if (std::abs(f) <= tol && polish-- <= 0) return u;
    const double fp = 0.25 * (q * q - 3.0 * u * u);
    double step = f / fp;
    // keep iterates on the branch nearest q_bar
    double un = u - step;
    const double lo = q / std::sqrt(3.0);
    if (un <= lo) un = 0.5 * (u + lo);
    u = un;
  }
  throw NoConvergence("ubar_root: Newton did not converge");
}
}  // namespace detail

/// Incoming state (u_in, rho_in) for mass flux eps in [0, eps_max).
inline IncomingFlow incoming_from_flux(double eps, const FlowConstants& fc) {
  if (eps < 0.0) throw FluxTooLarge("incoming_from_flux: negative flux");
  if (eps >= fc.eps_max())
    throw FluxTooLarge("incoming_from_flux: flux above eps_max = " +
                       std::to_string(fc.eps_max()));
  if (eps == 0.0) return {0.0, fc.q_bar, 0.0};
  const double u = detail::ubar_root(eps, fc);
  return {eps, u, 0.25 * (fc.q_bar * fc.q_bar - u * u)};
}

/// Signed-flux variant backing the varrho coordinate; |varrho| must stay
/// below the Newton-basin cap.
inline IncomingFlow incoming_state(double varrho, const FlowConstants& fc) {
  if (std::abs(varrho) > fc.varrho_cap())
    throw BadState("incoming_state: varrho outside the trusted tube");
  if (varrho == 0.0) return {0.0, fc.q_bar, 0.0};
  const double u = detail::ubar_root(varrho, fc);
  return {varrho, u, 0.25 * (fc.q_bar * fc.q_bar - u * u)};
}

/// Shock polar function G(u,v,eps) = (u - eps/rho)(u - u_in) + v^2.
inline double polar_G(const Velocity& U, const IncomingFlow& in,
                      const FlowConstants& fc) {
  const double rho = density(U, fc);
  return (U.u - in.eps / rho) * (U.u - in.u_in) + U.v * U.v;
}

struct Gradient {
  double du = 0.0;
  double dv = 0.0;
};

/// Analytic (G_u, G_v) including the eps/rho(u,v) dependence.
inline Gradient polar_grad(const Velocity& U, const IncomingFlow& in,
                           const FlowConstants& fc) {
  const double rho = density(U, fc);
  const double jump = U.u - in.u_in;
  const double w = in.eps / (2.0 * rho * rho);  // d(eps/rho)/du = w*u etc.
  const double gu = (U.u - in.eps / rho) + jump * (1.0 - w * U.u);
  const double gv = 2.0 * U.v - jump * w * U.v;
  return {gu, gv};
}

/// Point on the limit circle u^2 + v^2 = q_bar * u with slope u/v = k.
inline Velocity limit_polar_point(double k, const FlowConstants& fc) {
  if (!(k > 0.0) || !(k < std::sqrt(0.5)))
    throw BadSlope("limit_polar_point: k must lie in (0, sqrt(2)/2)");
  const double d = 1.0 + k * k;
  return {fc.q_bar * k * k / d, fc.q_bar * k / d};
}

namespace detail {
// Newton solve of (G(u,v) = 0, u - k v = 0) starting from the limit circle.
inline Velocity polar_slope_root(double k, const IncomingFlow& in,
                                 const FlowConstants& fc) {
  Velocity U = limit_polar_point(k, fc);
  if (in.eps == 0.0) return U;
  const double tol = 1e-13 * fc.q_bar * fc.q_bar;
  int polish = 2;
  for (int it = 0; it < 60; ++it) {
    const double g = polar_G(U, in, fc);
    const double s = U.u - k * U.v;
    if (std::abs(g) <= tol && std::abs(s) <= 1e-14 * fc.q_bar &&
        polish-- <= 0)
      return U;
    const Gradient dg = polar_grad(U, in, fc);
    const double det = dg.du * (-k) - dg.dv;
    if (det == 0.0)
      throw NoConvergence("polar_slope_root: singular Newton step");
    // solve [G_u G_v; 1 -k] [du dv]^T = [g s]^T
    const double du = (-k * g - dg.dv * s) / det;
    const double dv = (-g + dg.du * s) / det;
    U.u -= du;
    U.v -= dv;
  }
  throw NoConvergence("polar_slope_root: Newton did not converge");
}
}  // namespace detail

/// Downstream polar point with slope k for flux eps: Newton continuation of
/// (G = 0, u - k v = 0) off the limit circle. Enforces the entropy condition
/// u_in > q.
inline Velocity polar_point(double k, const IncomingFlow& in,
                            const FlowConstants& fc) {
  const Velocity U = detail::polar_slope_root(k, in, fc);
  if (in.eps > 0.0 && !(in.u_in > U.speed()))
    throw EntropyViolation("polar_point: entropy condition u_in > q fails");
  return U;
}

}  // namespace hodoshock
