#pragma once

// Quantitative verification: the boundary residual of the approximate free
// boundary (in both coordinate forms), the eps-scaling fit it feeds, the
// perturbation ratios against the limit solution, weighted norms, and the
// structural sign checks.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hodoshock/bvp_solver.hpp"
#include "hodoshock/gamma_boundary.hpp"
#include "hodoshock/limit_solution.hpp"
#include "hodoshock/numerics.hpp"
#include "hodoshock/physical_map.hpp"
#include "hodoshock/slope_field.hpp"

namespace hodoshock {

struct ResidualSample {
  double k = 0;
  double r_kr = 0;       // |Gamma' - F| in (k, varrho) form
  double r_uv = 0;       // slope mismatch in (u, v) form
  double two_form_gap = 0;  // Moebius-mapped F vs the direct slope formula
};

struct ResidualReport {
  double eps = 0;
  std::size_t nk = 0, nsigma = 0;
  double sup_residual = 0;
  double weighted_sup = 0;      // sin-weighted, discounting both collapses
  double two_form_gap_max = 0;
  std::vector<ResidualSample> samples;
};

/// Boundary residual R(k) = |Gamma'(k) - F(y_u/y_v at (k, Gamma(k)))| on the
/// wall row. The tangential derivative of the Dirichlet data is analytic
/// (dy/dk = B'), so only the cross-strip derivative is discretized.
inline ResidualReport boundary_residual(const FieldGrid& F,
                                        const GammaCurve& curve,
                                        const WallProfile& W, double eps,
                                        const FlowConstants& fc,
                                        std::size_t edge_margin = 2) {
  const StripGrid& g = F.grid();
  const std::size_t nk = g.spec.nk;
  ResidualReport rep;
  rep.eps = eps;
  rep.nk = nk;
  rep.nsigma = g.spec.nsigma;
  const double pi = 3.14159265358979323846;
  for (std::size_t i = edge_margin; i + edge_margin < nk; ++i) {
    const double k = g.k_col[i];
    const std::size_t p = g.id(i, 0);
    // dy/ds exact from the Dirichlet data, dy/dsigma one-sided into the strip
    const double ys = W.Bp(k) / g.dom.ds_dk(k);
    const double ysig = (-3.0 * F.value(i, 0) + 4.0 * F.value(i, 1) -
                         F.value(i, 2)) /
                        (2.0 * g.dsig);
    const double y_u = g.s_u[p] * ys + g.sg_u[p] * ysig;
    const double y_v = g.s_v[p] * ys + g.sg_v[p] * ysig;
    const double gamma_k = curve.gamma(k);
    const double dgamma_k = curve.dgamma(k);
    const double Fval = F_of(y_u / y_v, {k, gamma_k}, fc);

    ResidualSample s;
    s.k = k;
    s.r_kr = std::abs(dgamma_k - Fval);

    // (u, v)-form through the coordinate Jacobian at the wall node
    const Velocity U = g.vel(i, 0);
    const KRhoJacobian J = jacobian_general(U, gamma_k, fc);
    auto slope_uv = [&](double m) {
      return (J.u_k + J.u_r * m) / (J.v_k + J.v_r * m);
    };
    const SlopeVector sp = s_prime(U, y_u, y_v, fc);
    const double m_field = sp.s1 / sp.s2;
    s.r_uv = std::abs(slope_uv(dgamma_k) - m_field);
    s.two_form_gap = std::abs(slope_uv(Fval) - m_field);

    rep.sup_residual = std::max(rep.sup_residual, s.r_kr);
    rep.weighted_sup =
        std::max(rep.weighted_sup,
                 s.r_kr * std::sin(pi * (k - W.flat()) /
                                   (W.sharp() - W.flat())));
    rep.two_form_gap_max = std::max(rep.two_form_gap_max, s.two_form_gap);
    rep.samples.push_back(s);
  }
  return rep;
}

/// Least-squares slope of log sup-residual against log eps.
inline double order_fit(const std::vector<ResidualReport>& reports) {
  if (reports.size() < 3)
    throw InsufficientData("order_fit: need at least three eps points");
  std::vector<double> x, y;
  for (const auto& r : reports) {
    x.push_back(std::log(r.eps));
    y.push_back(std::log(r.sup_residual));
  }
  return num::fit_slope(x, y);
}

struct PerturbationReport {
  double eps = 0;
  double ratio_value = 0;                  // i = 0
  double ratio_gradient = 0;               // i = 1
  std::vector<double> betas;               // candidate Hoelder exponents
  std::vector<double> ratio_hessian;       // i = 2, one per beta
};

/// Weighted closeness of the solved field to the limit solution:
/// sup |grad^i y - grad^i Upsilon| (sharp-k)^(alpha+i) / eps^(power).
inline PerturbationReport perturbation_check(
    const FieldGrid& F, const WallProfile& W, double eps,
    const FlowConstants& fc, std::vector<double> betas = {0.25, 0.5, 0.75},
    std::size_t edge_margin = 8) {
  const StripGrid& g = F.grid();
  PerturbationReport rep;
  rep.eps = eps;
  rep.betas = std::move(betas);
  rep.ratio_hessian.assign(rep.betas.size(), 0.0);
  for (std::size_t i = edge_margin; i + edge_margin < g.spec.nk; ++i) {
    const double k = g.k_col[i];
    const UpsilonJet jet = upsilon_jet(k, W, fc);
    const double w = W.sharp() - k;
    const double w0 = std::pow(w, W.alpha());
    for (std::size_t j = 0; j < g.spec.nsigma; ++j) {
      const Deriv2 d = F.derivatives(i, j);
      const double d0 = std::abs(F.value(i, j) - W.B(k));
      rep.ratio_value = std::max(rep.ratio_value, d0 * w0 / eps);
      const double d1 = std::max(std::abs(d.y_u - jet.y_u),
                                 std::abs(d.y_v - jet.y_v));
      rep.ratio_gradient =
          std::max(rep.ratio_gradient, d1 * w0 * w / eps);
      const double d2 =
          std::max({std::abs(d.y_uu - jet.y_uu), std::abs(d.y_uv - jet.y_uv),
                    std::abs(d.y_vv - jet.y_vv)});
      for (std::size_t b = 0; b < rep.betas.size(); ++b)
        rep.ratio_hessian[b] =
            std::max(rep.ratio_hessian[b],
                     d2 * w0 * w * w / std::pow(eps, rep.betas[b]));
    }
  }
  return rep;
}

struct WeightedNorm {
  double m = 0;
  int p = 0;
  double beta = 0;
  double value = 0;
};

/// Discrete weighted Hoelder norm over samples (k_i, f(k_i), ..., f^(p)):
/// max_i sup (sharp-k)^(m+i) |f^(i)| plus the sampled Hoelder quotient of
/// the top derivative, with the pair count capped.
inline WeightedNorm weighted_norm(const std::vector<double>& ks,
                                  const std::vector<std::vector<double>>& f,
                                  double sharp, double m, int p, double beta,
                                  std::size_t pair_cap = 200000) {
  if (ks.size() != f.size() || ks.empty())
    throw BadState("weighted_norm: mismatched or empty samples");
  WeightedNorm out;
  out.m = m;
  out.p = p;
  out.beta = beta;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (static_cast<int>(f[i].size()) < p + 1)
      throw BadState("weighted_norm: missing derivative samples");
    for (int d = 0; d <= p; ++d)
      out.value = std::max(out.value, std::pow(sharp - ks[i], m + d) *
                                          std::abs(f[i][d]));
  }
  const std::size_t n = ks.size();
  auto quotient = [&](std::size_t i, std::size_t j) {
    const std::size_t a = std::min(i, j), b = std::max(i, j);
    const double num = std::abs(f[a][p] - f[b][p]);
    const double den = std::pow(std::abs(ks[a] - ks[b]), beta);
    return std::pow(sharp - ks[b], m + p + beta) * num / den;
  };
  if (n * (n - 1) / 2 <= pair_cap) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        out.value = std::max(out.value, quotient(i, j));
  } else {
    for (std::size_t lag = 1; lag < n; lag *= 2)
      for (std::size_t i = 0; i + lag < n; ++i)
        out.value = std::max(out.value, quotient(i, i + lag));
  }
  return out;
}

struct CheckItem {
  std::string name;
  bool pass = false;
  double value = 0;
};

/// Structural sign checks along the arc (and over the strip when a grid is
/// supplied): the transversality product on the shock, subsonicity, and the
/// signs of H, h and dF_limit.
inline std::vector<CheckItem> structural_signs(const WallProfile& W,
                                               double eps,
                                               const FlowConstants& fc,
                                               const StripGrid* grid = nullptr,
                                               std::size_t n_arc = 200) {
  std::vector<CheckItem> out;
  const double q2 = fc.q_bar * fc.q_bar;
  auto arc_k = [&](std::size_t i) {
    return W.flat() +
           (W.sharp() - W.flat()) * (i + 0.5) / static_cast<double>(n_arc);
  };

  if (eps > 0.0) {
    const IncomingFlow in = incoming_from_flux(eps, fc);
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_arc; ++i) {
      const Velocity U = polar_point(arc_k(i), in, fc);
      mn = std::min(mn, dot_grad_G(sg_prime(U, in, fc), U, in, fc));
    }
    out.push_back({"sg_dot_gradG_positive_on_polar", mn > 0.0, mn});
  } else {
    const IncomingFlow in{0.0, fc.q_bar, 0.0};
    double mx = 0.0;
    for (std::size_t i = 0; i < n_arc; ++i) {
      const Velocity U = limit_polar_point(arc_k(i), fc);
      mx = std::max(mx,
                    std::abs(dot_grad_G(sg_prime(U, in, fc), U, in, fc)));
    }
    out.push_back({"sg_dot_gradG_zero_at_limit", mx <= 1e-12 * q2, mx});
  }

  double subsonic_margin = std::numeric_limits<double>::infinity();
  if (grid) {
    for (std::size_t p = 0; p < grid->n(); ++p) {
      const Velocity U{grid->u[p], grid->v[p]};
      subsonic_margin =
          std::min(subsonic_margin, sound_speed_sq(U, fc) - U.speed_sq());
    }
  } else {
    for (std::size_t i = 0; i < n_arc; ++i) {
      const Velocity U = limit_polar_point(arc_k(i), fc);
      subsonic_margin =
          std::min(subsonic_margin, sound_speed_sq(U, fc) - U.speed_sq());
    }
  }
  out.push_back({"subsonic_everywhere", subsonic_margin > 0.0,
                 subsonic_margin});
  out.push_back({"subsonic_margin_ample", subsonic_margin > 1e-4 * q2,
                 subsonic_margin});

  double mnH = std::numeric_limits<double>::infinity();
  double mnh = mnH, mxdF = -mnH;
  for (std::size_t i = 0; i < n_arc; ++i) {
    const double k = arc_k(i);
    mnH = std::min(mnH, H_of(k, fc));
    mnh = std::min(mnh, h_of(k, eps, fc));
    mxdF = std::max(mxdF, dF_limit(k, W, fc));
  }
  out.push_back({"H_positive", mnH > 0.0, mnH});
  out.push_back({"h_positive", mnh > 0.0, mnh});
  out.push_back({"dF_limit_negative", mxdF < 0.0, mxdF});
  return out;
}

}  // namespace hodoshock
