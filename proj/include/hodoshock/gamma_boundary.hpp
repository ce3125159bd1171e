#pragma once

// The approximate free boundary varrho = Gamma(k): explicit ODE integration
// with an integrating-factor quadrature as the independent route, a tip
// representation near k = sharp where (ln B')' is singular, and the
// lower-bound diagnostic. The curve stores the gap eps - Gamma, which is
// the quantity that collapses at both ends.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hodoshock/errors.hpp"
#include "hodoshock/model_core.hpp"
#include "hodoshock/numerics.hpp"
#include "hodoshock/slope_field.hpp"
#include "hodoshock/wall_profile.hpp"

namespace hodoshock {

/// dGamma/dk = (-(ln B')' - H(k)) (Gamma - eps) - eps h(k, eps).
inline double gamma_rhs(double k, double Gamma, const WallProfile& W,
                        double eps, const FlowConstants& fc) {
  return (-W.dlogBp(k) - H_of(k, fc)) * (Gamma - eps) -
         eps * h_of(k, eps, fc);
}

class GammaCurve {
 public:
  GammaCurve(double eps, double flat, double sharp, std::vector<double> knots,
             std::vector<double> gap, std::vector<double> dgap,
             std::vector<double> d2gap, double tip_coeff)
      : eps_(eps), flat_(flat), sharp_(sharp), knots_(std::move(knots)),
        gap_(std::move(gap)), dgap_(std::move(dgap)),
        d2gap_(std::move(d2gap)), tip_coeff_(tip_coeff) {}

  double eps() const { return eps_; }
  double flat() const { return flat_; }
  double sharp() const { return sharp_; }
  double k_last() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }
  double tip_coefficient() const { return tip_coeff_; }

  double gap_at(std::size_t i) const { return gap_[i]; }

  /// eps - Gamma(k) >= 0 (cubic Hermite between knots).
  double gap(double k) const {
    const std::size_t i = locate(k);
    return num::hermite(k, knots_[i], knots_[i + 1], gap_[i], gap_[i + 1],
                        dgap_[i], dgap_[i + 1]);
  }
  double gamma(double k) const { return eps_ - gap(k); }

  double dgamma(double k) const {
    const std::size_t i = locate(k);
    return -num::hermite(k, knots_[i], knots_[i + 1], dgap_[i], dgap_[i + 1],
                         d2gap_[i], d2gap_[i + 1]);
  }

  double d2gamma(double k) const {
    const std::size_t i = locate(k);
    const double t = (k - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return -((1.0 - t) * d2gap_[i] + t * d2gap_[i + 1]);
  }

  double gamma_at(std::size_t i) const { return eps_ - gap_[i]; }
  double dgamma_at(std::size_t i) const { return -dgap_[i]; }
  double d2gamma_at(std::size_t i) const { return -d2gap_[i]; }

 private:
  std::size_t locate(double k) const {
    if (k < knots_.front() - 1e-12 * (sharp_ - flat_) || k > knots_.back())
      throw OutOfDomain("GammaCurve: k outside the knot range");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), k);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i > 0) --i;
    if (i >= knots_.size() - 1) i = knots_.size() - 2;
    return i;
  }

  double eps_, flat_, sharp_;
  std::vector<double> knots_, gap_, dgap_, d2gap_;
  double tip_coeff_;
};

namespace gamma_detail {

/// Chebyshev-clustered knots on [flat, sharp), endpoint excluded.
inline std::vector<double> make_knots(double flat, double sharp,
                                      std::size_t n) {
  std::vector<double> k(n);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    k[i] = flat + (sharp - flat) * 0.5 * (1.0 - std::cos(pi * t));
  }
  return k;
}

/// Cumulative integral of H along the knots (exp factor of the ODE).
inline std::vector<double> cumulative_H(const std::vector<double>& knots,
                                        const FlowConstants& fc) {
  std::vector<double> ih(knots.size(), 0.0);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    ih[i + 1] = ih[i] + num::integrate(
                            [&](double t) { return H_of(t, fc); }, knots[i],
                            knots[i + 1], 1e-15, 1e-13);
  }
  return ih;
}

// dh/dk at fixed eps. h carries ~1e-12 relative jitter from the Newton
// solves inside it, so the step must stay wide enough that the quotient
// noise (jitter/step) remains far below the truncation error budget.
inline double h_t_fd(double k, double eps, const FlowConstants& fc) {
  const double step = 1e-3;
  return num::fd_richardson([&](double t) { return h_of(t, eps, fc); }, k,
                            step);
}

}  // namespace gamma_detail

/// Integrating-factor value Gamma(k) by adaptive quadrature,
/// Gamma - eps = -(eps/B'(k)) Int_flat^k B'(t) e^{-Int_t^k H} h(t,eps) dt.
inline double gamma_quadrature(const WallProfile& W, double eps,
                               const FlowConstants& fc, double k) {
  if (k < W.flat() || k >= W.sharp())
    throw OutOfDomain("gamma_quadrature: k outside [flat, sharp)");
  if (k == W.flat()) return eps;
  auto IH = [&](double a, double b) {
    return num::integrate([&](double t) { return H_of(t, fc); }, a, b, 1e-15,
                          1e-13);
  };
  const double ihk = IH(W.flat(), k);
  const double s1 = num::integrate(
      [&](double t) {
        const double iht = IH(W.flat(), t);
        return W.Bp(t) * std::exp(iht - ihk) * h_of(t, eps, fc);
      },
      W.flat(), k, 1e-12 * eps, 1e-10);
  return eps - eps * s1 / W.Bp(k);
}

/// Tip representation (integration by parts of the quadrature) valid in the
/// exact-tail window; accurate where the plain quadrature grows stiff.
inline double gamma_tip(const WallProfile& W, double eps,
                        const FlowConstants& fc, double k) {
  if (!(W.sharp() - k < W.delta()))
    throw OutOfDomain("gamma_tip: k is not in the tail window");
  auto IH = [&](double a, double b) {
    return num::integrate([&](double t) { return H_of(t, fc); }, a, b, 1e-15,
                          1e-13);
  };
  const double ihk = IH(W.flat(), k);
  const double w = W.sharp() - k;
  const double lead = (eps / W.alpha()) * w * h_of(k, eps, fc);
  const double boundary = (eps / W.alpha()) * std::pow(w, W.alpha() + 1.0) *
                          W.B(W.flat()) * std::exp(-ihk) *
                          h_of(W.flat(), eps, fc);
  const double integral = num::integrate(
      [&](double t) {
        const double iht = IH(W.flat(), t);
        const double ht = h_of(t, eps, fc);
        const double htp = gamma_detail::h_t_fd(t, eps, fc);
        return W.B(t) * (H_of(t, fc) * ht + htp) * std::exp(iht - ihk);
      },
      W.flat(), k, 1e-10 * eps, 1e-8);
  const double gap = lead - boundary -
                     (eps / W.alpha()) * std::pow(w, W.alpha() + 1.0) *
                         integral;
  return eps - gap;
}

struct GammaGrid {
  std::size_t n_knots = 512;
  double rk_abs_tol_scale = 1e-13;  // times eps
  double rk_rel_tol = 1e-11;
};

/// Build the curve: adaptive RK45 on the gap equation up to the tip switch
/// at sharp - delta/2, the exact-tail tip representation beyond it.
inline GammaCurve solve_gamma_ode(const WallProfile& W, double eps,
                                  const FlowConstants& fc,
                                  const GammaGrid& grid = {}) {
  if (!(eps > 0.0)) throw BadState("solve_gamma_ode: eps must be positive");
  if (eps > fc.varrho_cap())
    throw BadState("solve_gamma_ode: eps above the coordinate tube cap");
  const double flat = W.flat(), sharp = W.sharp();
  const std::vector<double> knots =
      gamma_detail::make_knots(flat, sharp, grid.n_knots);
  const double k_tip = sharp - 0.5 * W.delta();

  std::vector<double> gap(knots.size(), 0.0);
  auto rhs = [&](double k, double g) {
    return -(W.dlogBp(k) + H_of(k, fc)) * g + eps * h_of(k, eps, fc);
  };

  // ODE part.
  std::size_t i_tip = knots.size();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] > k_tip) {
      i_tip = i + 1;
      break;
    }
    gap[i + 1] = num::rk45(rhs, knots[i], knots[i + 1], gap[i],
                           grid.rk_abs_tol_scale * eps, grid.rk_rel_tol);
  }

  // Tip part from the integration-by-parts representation, computed with
  // cumulative panel integrals along the knots.
  if (i_tip < knots.size()) {
    std::vector<double> ih = gamma_detail::cumulative_H(knots, fc);
    std::vector<double> s2(knots.size(), 0.0);
    auto inner = [&](std::size_t i, double t) {
      // IH(t) for t inside [knots[i], knots[i+1]]
      return ih[i] + num::integrate_panel(
                         [&](double x) { return H_of(x, fc); }, knots[i], t);
    };
    // Fixed composite panels: the knots are already clustered where the
    // integrand steepens, and the h-jitter rules out tight adaptive goals.
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      auto f = [&](double t) {
        const double ht = h_of(t, eps, fc);
        const double htp = gamma_detail::h_t_fd(t, eps, fc);
        return W.B(t) * (H_of(t, fc) * ht + htp) *
               std::exp(inner(i, t) - ih[i + 1]);
      };
      const double mid = 0.5 * (knots[i] + knots[i + 1]);
      const double panel = num::integrate_panel(f, knots[i], mid) +
                           num::integrate_panel(f, mid, knots[i + 1]);
      s2[i + 1] = s2[i] + panel * std::exp(ih[i + 1]);
    }
    const double Bflat = W.B(flat);
    for (std::size_t i = i_tip; i < knots.size(); ++i) {
      const double w = sharp - knots[i];
      const double lead = (eps / W.alpha()) * w * h_of(knots[i], eps, fc);
      const double wpow = std::pow(w, W.alpha() + 1.0);
      const double boundary = (eps / W.alpha()) * wpow * Bflat *
                              std::exp(-ih[i]) * h_of(flat, eps, fc);
      gap[i] =
          lead - boundary - (eps / W.alpha()) * wpow * std::exp(-ih[i]) * s2[i];
    }
  }

  // Derivatives of Gamma from the ODE and its k-derivative.
  std::vector<double> dgap(knots.size()), d2gap(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double k = knots[i];
    const double P = W.dlogBp(k) + H_of(k, fc);
    const double h = h_of(k, eps, fc);
    dgap[i] = -P * gap[i] + eps * h;
    const double step = std::min(1e-6, 0.25 * (sharp - k));
    auto Pf = [&](double t) { return W.dlogBp(t) + H_of(t, fc); };
    const double Pp =
        (k - flat < step)
            ? (-3.0 * Pf(k) + 4.0 * Pf(k + step) - Pf(k + 2.0 * step)) /
                  (2.0 * step)
            : num::fd_central(Pf, k, step);
    const double hk = gamma_detail::h_t_fd(k, eps, fc);
    d2gap[i] = -Pp * gap[i] - P * dgap[i] + eps * hk;
  }

  const double tip_coeff = (eps / W.alpha()) * h_of(sharp, eps, fc);
  return GammaCurve(eps, flat, sharp, knots, gap, dgap, d2gap, tip_coeff);
}

/// inf over knots of |Gamma - eps| / (eps sin(pi (k-flat)/(sharp-flat))).
inline double check_gamma_lower_bound(const GammaCurve& curve) {
  const double pi = 3.14159265358979323846;
  const double span = curve.sharp() - curve.flat();
  double inf = std::numeric_limits<double>::infinity();
  const auto& knots = curve.knots();
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double s = std::sin(pi * (knots[i] - curve.flat()) / span);
    if (s <= 0.0) continue;
    inf = std::min(inf, curve.gap_at(i) / (curve.eps() * s));
  }
  return inf;
}

}  // namespace hodoshock
