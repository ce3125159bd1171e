#pragma once

// The (k, varrho) curvilinear coordinates around the limit shock polar:
// varrho is the flux level of the polar through a state, k = u/v. Provides
// the implicit derivative G_varrho, both Jacobians, second derivatives of
// the implicit varrho(u,v), the d/d(varrho) operator on the circle, and the
// inverse map (k, varrho) -> (u, v).

#include <cmath>

#include "hodoshock/errors.hpp"
#include "hodoshock/model_core.hpp"

namespace hodoshock {

struct KRho {
  double k = 0.0;
  double varrho = 0.0;
};

struct KRhoJacobian {
  // forward rows: d(k)/d(u,v), d(varrho)/d(u,v)
  double k_u = 0, k_v = 0, r_u = 0, r_v = 0;
  // inverse: d(u,v)/d(k,varrho)
  double u_k = 0, u_r = 0, v_k = 0, v_r = 0;
};

/// Literal implicit derivative dG/d(varrho) of the shock polar function,
/// with u_in(varrho) differentiated through the flux relation.
///
/// On the limit circle this evaluates to +(4 q_bar + 2u)/q_bar^2; the sign
/// is the one consistent with the (k, varrho) Jacobian used downstream.
inline double g_varrho(const Velocity& U, double varrho,
                       const FlowConstants& fc) {
  const IncomingFlow in = incoming_state(varrho, fc);
  const double rho = density(U, fc);
  const double up = ubar_prime(in.u_in, fc);
  return (in.u_in - U.u) / rho - up * (U.u - varrho / rho);
}

/// Flux coordinate of a state: the varrho with G(u, v, varrho) = 0.
inline double varrho_of(const Velocity& U, const FlowConstants& fc) {
  double r = 0.0;
  const double tol = 1e-13 * fc.q_bar * fc.q_bar;
  const double cap = fc.varrho_cap();
  int polish = 2;
  for (int it = 0; it < 60; ++it) {
    IncomingFlow in;
    try {
      in = incoming_state(r, fc);
    } catch (const BadState&) {
      throw NoConvergence("varrho_of: iterate left the trusted tube");
    }
    const double g = polar_G(U, in, fc);
    if (std::abs(g) <= tol && polish-- <= 0) return r;
    const double gr = g_varrho(U, r, fc);
    if (gr == 0.0) throw NoConvergence("varrho_of: vanishing G_varrho");
    double rn = r - g / gr;
    if (std::abs(rn) > cap) rn = (rn > 0 ? cap : -cap);
    if (rn == r && std::abs(g) > tol)
      throw NoConvergence("varrho_of: stalled at the tube boundary");
    r = rn;
  }
  throw NoConvergence("varrho_of: Newton did not converge");
}

/// First derivatives of the implicit varrho(u, v).
inline Gradient varrho_grad(const Velocity& U, double varrho,
                            const FlowConstants& fc) {
  const IncomingFlow in = incoming_state(varrho, fc);
  const Gradient g = polar_grad(U, in, fc);
  const double gr = g_varrho(U, varrho, fc);
  return {-g.du / gr, -g.dv / gr};
}

struct PolarSecondDerivs {
  double g_uu = 0, g_uv = 0, g_vv = 0;   // in (u, v)
  double g_ur = 0, g_vr = 0, g_rr = 0;   // mixed with varrho
};

/// All second partial derivatives of G(u, v, varrho).
inline PolarSecondDerivs polar_G_hessian(const Velocity& U, double varrho,
                                         const FlowConstants& fc) {
  const IncomingFlow in = incoming_state(varrho, fc);
  const double rho = density(U, fc);
  const double r2 = rho * rho, r3 = r2 * rho;
  const double jump = U.u - in.u_in;           // Q~
  const double pu = 1.0 - varrho * U.u / (2.0 * r2);
  const double pv = -varrho * U.v / (2.0 * r2);
  const double p = U.u - varrho / rho;
  const double up = ubar_prime(in.u_in, fc);
  const double upp = ubar_second(in.u_in, fc);

  PolarSecondDerivs d;
  const double puu = -0.5 * varrho / r2 - 0.5 * varrho * U.u * U.u / r3;
  const double puv = -0.5 * varrho * U.u * U.v / r3;
  const double pvv = -0.5 * varrho / r2 - 0.5 * varrho * U.v * U.v / r3;
  const double pur = -0.5 * U.u / r2;
  const double pvr = -0.5 * U.v / r2;
  d.g_uu = puu * jump + 2.0 * pu;
  d.g_uv = puv * jump + pv;
  d.g_vv = pvv * jump + 2.0;
  d.g_ur = pur * jump - pu * up - 1.0 / rho;
  d.g_vr = pvr * jump - pv * up;
  d.g_rr = 2.0 * up / rho - p * upp;
  return d;
}

struct SymmetricHess {
  double uu = 0, uv = 0, vv = 0;
};

/// Second derivatives of the implicit varrho(u, v).
inline SymmetricHess varrho_hess(const Velocity& U, double varrho,
                                 const FlowConstants& fc) {
  const IncomingFlow in = incoming_state(varrho, fc);
  const Gradient g = polar_grad(U, in, fc);
  const double gr = g_varrho(U, varrho, fc);
  const PolarSecondDerivs s = polar_G_hessian(U, varrho, fc);
  const double ru = -g.du / gr, rv = -g.dv / gr;
  SymmetricHess h;
  h.uu = -(s.g_uu + 2.0 * s.g_ur * ru + s.g_rr * ru * ru) / gr;
  h.uv = -(s.g_uv + s.g_ur * rv + s.g_vr * ru + s.g_rr * ru * rv) / gr;
  h.vv = -(s.g_vv + 2.0 * s.g_vr * rv + s.g_rr * rv * rv) / gr;
  return h;
}

/// Jacobian pair at a state on the limit circle (varrho = 0), closed forms.
inline KRhoJacobian jacobian_at(const Velocity& U, const FlowConstants& fc) {
  if (!(U.v > 0.0)) throw BadState("jacobian_at: requires v > 0");
  const double q = fc.q_bar, u = U.u, v = U.v;
  KRhoJacobian J;
  J.k_u = 1.0 / v;
  J.k_v = -u / (v * v);
  J.r_u = q * q * (q - 2.0 * u) / (2.0 * (2.0 * q + u));
  J.r_v = -q * q * v / (2.0 * q + u);
  const double fac = 2.0 * (q - u) * (2.0 * q + u) / (q * q * q);
  J.u_k = fac * q * q * v / (2.0 * q + u);
  J.u_r = fac * (-u / (v * v));
  J.v_k = fac * q * q * (q - 2.0 * u) / (2.0 * (2.0 * q + u));
  J.v_r = fac * (-1.0 / v);
  return J;
}

/// Jacobian pair at a general tube state with flux coordinate varrho.
inline KRhoJacobian jacobian_general(const Velocity& U, double varrho,
                                     const FlowConstants& fc) {
  if (!(U.v > 0.0)) throw BadState("jacobian_general: requires v > 0");
  KRhoJacobian J;
  J.k_u = 1.0 / U.v;
  J.k_v = -U.u / (U.v * U.v);
  const Gradient rg = varrho_grad(U, varrho, fc);
  J.r_u = rg.du;
  J.r_v = rg.dv;
  const double det = J.k_u * J.r_v - J.k_v * J.r_u;
  if (det == 0.0) throw BadState("jacobian_general: singular Jacobian");
  J.u_k = J.r_v / det;
  J.u_r = -J.k_v / det;
  J.v_k = -J.r_u / det;
  J.v_r = J.k_u / det;
  return J;
}

/// The d/d(varrho) operator at varrho = 0 applied to a function with
/// gradient (f_u, f_v): -2(2 q_bar + u)/(q_bar^3 u) (u f_u + v f_v).
inline double d_varrho_limit(const Velocity& U, double f_u, double f_v,
                             const FlowConstants& fc) {
  if (!(U.u > 0.0)) throw BadState("d_varrho_limit: requires u > 0");
  const double q = fc.q_bar;
  return -2.0 * (2.0 * q + U.u) / (q * q * q * U.u) *
         (U.u * f_u + U.v * f_v);
}

/// Inverse coordinate map: the state with slope k on the varrho-level polar.
inline Velocity uv_from_kr(const KRho& kr, const FlowConstants& fc) {
  const IncomingFlow in = incoming_state(kr.varrho, fc);
  return detail::polar_slope_root(kr.k, in, fc);
}

}  // namespace hodoshock
