#pragma once

// Elliptic solve of the hodograph equation on the narrow strip between the
// approximate wall image varrho = Gamma(k) and the shock polar varrho = eps.
// Computational coordinates (s, sigma) in [0,1]^2: s is a logit-graded
// reparameterization of k (the strip collapses at both ends and B blows up
// at sharp), sigma spans the strip width. Metric terms are exact per node;
// the discretization is a 9-point O(h^2) stencil with Dirichlet data on
// sigma = 0 and the truncation edges and the oblique condition on sigma = 1.

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "hodoshock/errors.hpp"
#include "hodoshock/gamma_boundary.hpp"
#include "hodoshock/hodograph_pde.hpp"
#include "hodoshock/kr_coords.hpp"
#include "hodoshock/model_core.hpp"
#include "hodoshock/wall_profile.hpp"

namespace hodoshock {

struct StripGridSpec {
  std::size_t nk = 256;      // nodes along s (the k-direction)
  std::size_t nsigma = 32;   // nodes across the strip
};

/// Dirichlet data near the sharp edge: plain truncation uses B itself,
/// bn_cap freezes B at its value one cap-distance before sharp.
enum class WallDataMode { truncate, bn_cap };

class StripDomain {
 public:
  StripDomain(const WallProfile& W, double eps, const GammaCurve& gamma,
              const FlowConstants& fc, double eta_l, double eta_r)
      : W_(&W), gamma_(&gamma), fc_(fc), eps_(eps) {
    if (!(eta_l > 0.0 && eta_r > 0.0))
      throw DegenerateWidth("build_domain: truncation margins must be > 0");
    k_lo_ = W.flat() + eta_l;
    k_hi_ = W.sharp() - eta_r;
    if (!(k_lo_ < k_hi_))
      throw DegenerateWidth("build_domain: margins leave no k-range");
    if (k_hi_ > gamma.k_last())
      throw DegenerateWidth(
          "build_domain: Gamma knots do not cover the truncated range");
    for (int i = 0; i <= 64; ++i) {
      const double k = k_lo_ + (k_hi_ - k_lo_) * i / 64.0;
      if (!(gamma.gap(k) > 0.0))
        throw DegenerateWidth("build_domain: strip width vanishes inside "
                              "the truncated range");
    }
    w_lo_ = std::log((k_lo_ - W.flat()) / (W.sharp() - k_lo_));
    w_hi_ = std::log((k_hi_ - W.flat()) / (W.sharp() - k_hi_));
  }

  const WallProfile& wall() const { return *W_; }
  const GammaCurve& gamma() const { return *gamma_; }
  const FlowConstants& constants() const { return fc_; }
  double eps() const { return eps_; }
  double k_lo() const { return k_lo_; }
  double k_hi() const { return k_hi_; }

  double k_of_s(double s) const {
    const double w = w_lo_ + s * (w_hi_ - w_lo_);
    const double e = std::exp(w);
    return (W_->flat() + W_->sharp() * e) / (1.0 + e);
  }
  double s_of_k(double k) const {
    const double w = std::log((k - W_->flat()) / (W_->sharp() - k));
    return (w - w_lo_) / (w_hi_ - w_lo_);
  }
  /// ds/dk and d2s/dk2 of the grading map.
  double ds_dk(double k) const {
    const double a = k - W_->flat(), b = W_->sharp() - k;
    return (1.0 / a + 1.0 / b) / (w_hi_ - w_lo_);
  }
  double d2s_dk2(double k) const {
    const double a = k - W_->flat(), b = W_->sharp() - k;
    return (-1.0 / (a * a) + 1.0 / (b * b)) / (w_hi_ - w_lo_);
  }

  double varrho_at(double k, double sigma) const {
    const double gap = gamma_->gap(k);
    return (sigma >= 1.0) ? eps_ : (eps_ - gap) + sigma * gap;
  }

 private:
  const WallProfile* W_;
  const GammaCurve* gamma_;
  FlowConstants fc_;
  double eps_, k_lo_, k_hi_, w_lo_, w_hi_;
};

inline StripDomain build_domain(const WallProfile& W, double eps,
                                const GammaCurve& gamma,
                                const FlowConstants& fc, double eta_l,
                                double eta_r) {
  return StripDomain(W, eps, gamma, fc, eta_l, eta_r);
}

/// Per-node geometry and metric data of the structured strip grid.
struct StripGrid {
  StripDomain dom;
  StripGridSpec spec;
  double ds = 0, dsig = 0;
  std::vector<double> k_col;               // k per i
  std::vector<double> u, v, varrho;        // per node (i*nsigma + j)
  std::vector<double> s_u, s_v, sg_u, sg_v;    // grad s, grad sigma
  std::vector<double> s_uu, s_uv, s_vv;        // second derivatives of s
  std::vector<double> sg_uu, sg_uv, sg_vv;     // second derivatives of sigma
  std::vector<double> u_s, u_sg, v_s, v_sg;    // inverse (forward map)
  std::vector<double> a_ss, a_ssig, a_sgsg, b_s, b_sig;  // transformed PDE
  std::vector<double> obl_I, obl_J;        // oblique coefficients per i
  std::vector<double> forcing;             // interior_f sampled at all nodes

  std::size_t id(std::size_t i, std::size_t j) const {
    return i * spec.nsigma + j;
  }
  std::size_t n() const { return spec.nk * spec.nsigma; }
  Velocity vel(std::size_t i, std::size_t j) const {
    return {u[id(i, j)], v[id(i, j)]};
  }
};

struct NodeRef {
  std::size_t i = 0, j = 0;
  double k = 0, s = 0, sigma = 0, varrho = 0;
  Velocity U;
};

/// Boundary/forcing data; defaults describe the physical problem.
struct ProblemData {
  std::function<double(const NodeRef&)> interior_f;
  std::function<double(const NodeRef&)> wall_value;
  std::function<double(const NodeRef&)> edge_value;
  std::function<double(const NodeRef&, const ObliqueCoeffs&)> shock_rhs;
};

inline ProblemData default_problem(const StripDomain& dom,
                                   WallDataMode mode = WallDataMode::truncate,
                                   double bn_cap_distance = 0.0) {
  const WallProfile& W = dom.wall();
  double cap = std::numeric_limits<double>::infinity();
  if (mode == WallDataMode::bn_cap) {
    const double d = (bn_cap_distance > 0.0)
                         ? bn_cap_distance
                         : 2.0 * (W.sharp() - dom.k_hi());
    cap = W.B(W.sharp() - d);
  }
  ProblemData data;
  data.interior_f = [](const NodeRef&) { return 0.0; };
  data.wall_value = [&W, cap](const NodeRef& n) {
    return std::min(W.B(n.k), cap);
  };
  data.edge_value = [&W, cap](const NodeRef& n) {
    return std::min(W.B(n.k), cap);
  };
  data.shock_rhs = [](const NodeRef&, const ObliqueCoeffs&) { return 0.0; };
  return data;
}

struct AssembledSystem {
  std::shared_ptr<StripGrid> grid;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
};

namespace bvp_detail {

struct Metric {
  double s_u, s_v, sg_u, sg_v;
  double s_uu, s_uv, s_vv;
  double sg_uu, sg_uv, sg_vv;
};

inline Metric metric_at(const StripDomain& dom, double k, double sigma,
                        double varrho, const Velocity& U,
                        const FlowConstants& fc) {
  Metric m{};
  const double uu = U.u, vv = U.v;
  // k(u,v) = u/v and the s(k) grading
  const double k_u = 1.0 / vv, k_v = -uu / (vv * vv);
  const double k_uu = 0.0, k_uv = -1.0 / (vv * vv),
               k_vv = 2.0 * uu / (vv * vv * vv);
  const double sp = dom.ds_dk(k), spp = dom.d2s_dk2(k);
  m.s_u = sp * k_u;
  m.s_v = sp * k_v;
  m.s_uu = spp * k_u * k_u + sp * k_uu;
  m.s_uv = spp * k_u * k_v + sp * k_uv;
  m.s_vv = spp * k_v * k_v + sp * k_vv;

  // sigma(u,v) = (varrho(u,v) - Gamma(k)) / gap(k)
  const Gradient rg = varrho_grad(U, varrho, fc);
  const SymmetricHess rh = varrho_hess(U, varrho, fc);
  const GammaCurve& G = dom.gamma();
  const double gap = G.gap(k);
  const double gp = G.dgamma(k);    // Gamma'
  const double gpp = G.d2gamma(k);  // Gamma''
  const double one_m = 1.0 - sigma;
  m.sg_u = (rg.du - one_m * gp * k_u) / gap;
  m.sg_v = (rg.dv - one_m * gp * k_v) / gap;
  auto second = [&](double r_xy, double sg_x, double sg_y, double k_x,
                    double k_y, double k_xy) {
    const double dN =
        r_xy + sg_y * gp * k_x - one_m * (gpp * k_x * k_y + gp * k_xy);
    return dN / gap + sg_x * gp * k_y / gap;
  };
  m.sg_uu = second(rh.uu, m.sg_u, m.sg_u, k_u, k_u, k_uu);
  m.sg_vv = second(rh.vv, m.sg_v, m.sg_v, k_v, k_v, k_vv);
  const double suv1 = second(rh.uv, m.sg_u, m.sg_v, k_u, k_v, k_uv);
  const double suv2 = second(rh.uv, m.sg_v, m.sg_u, k_v, k_u, k_uv);
  m.sg_uv = 0.5 * (suv1 + suv2);
  return m;
}

}  // namespace bvp_detail

/// Build geometry, metric and the linear system.
inline AssembledSystem assemble(const StripDomain& dom,
                                const StripGridSpec& spec,
                                const ProblemData& data) {
  if (spec.nk < 16 || spec.nsigma < 8)
    throw BadState("assemble: grid must be at least 16 x 8");
  auto grid = std::make_shared<StripGrid>(StripGrid{dom, spec});
  StripGrid& g = *grid;
  const std::size_t nk = spec.nk, ns = spec.nsigma;
  const FlowConstants& fc = dom.constants();
  g.ds = 1.0 / static_cast<double>(nk - 1);
  g.dsig = 1.0 / static_cast<double>(ns - 1);
  const std::size_t n = g.n();
  g.k_col.resize(nk);
  g.u.resize(n);
  g.v.resize(n);
  g.varrho.resize(n);
  g.s_u.resize(n);
  g.s_v.resize(n);
  g.sg_u.resize(n);
  g.sg_v.resize(n);
  g.s_uu.resize(n);
  g.s_uv.resize(n);
  g.s_vv.resize(n);
  g.sg_uu.resize(n);
  g.sg_uv.resize(n);
  g.sg_vv.resize(n);
  g.u_s.resize(n);
  g.u_sg.resize(n);
  g.v_s.resize(n);
  g.v_sg.resize(n);
  g.a_ss.resize(n);
  g.a_ssig.resize(n);
  g.a_sgsg.resize(n);
  g.b_s.resize(n);
  g.b_sig.resize(n);
  g.obl_I.assign(nk, 0.0);
  g.obl_J.assign(nk, 0.0);

  const IncomingFlow inflow = (dom.eps() > 0.0)
                                  ? incoming_from_flux(dom.eps(), fc)
                                  : IncomingFlow{0.0, fc.q_bar, 0.0};

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

  // geometry + metric
  for (std::size_t i = 0; i < nk; ++i) {
    const double s = i * g.ds;
    const double k = dom.k_of_s(s);
    g.k_col[i] = k;
    for (std::size_t j = 0; j < ns; ++j) {
      const double sigma = j * g.dsig;
      const double r = dom.varrho_at(k, sigma);
      const Velocity U = uv_from_kr({k, r}, fc);
      const std::size_t p = g.id(i, j);
      g.u[p] = U.u;
      g.v[p] = U.v;
      g.varrho[p] = r;
      const bvp_detail::Metric m =
          bvp_detail::metric_at(dom, k, sigma, r, U, fc);
      g.s_u[p] = m.s_u;
      g.s_v[p] = m.s_v;
      g.sg_u[p] = m.sg_u;
      g.sg_v[p] = m.sg_v;
      g.s_uu[p] = m.s_uu;
      g.s_uv[p] = m.s_uv;
      g.s_vv[p] = m.s_vv;
      g.sg_uu[p] = m.sg_uu;
      g.sg_uv[p] = m.sg_uv;
      g.sg_vv[p] = m.sg_vv;
      const double det = m.s_u * m.sg_v - m.s_v * m.sg_u;
      if (det == 0.0) throw SolverBreakdown("assemble: singular metric");
      g.u_s[p] = m.sg_v / det;
      g.u_sg[p] = -m.s_v / det;
      g.v_s[p] = -m.sg_u / det;
      g.v_sg[p] = m.s_u / det;

      const PdeCoeffs pc = interior_coeffs(U, fc);
      const double a11 = pc.a_uu, a12 = 0.5 * pc.a_uv, a22 = pc.a_vv;
      g.a_ss[p] = a11 * m.s_u * m.s_u + 2.0 * a12 * m.s_u * m.s_v +
                  a22 * m.s_v * m.s_v;
      g.a_ssig[p] = a11 * m.s_u * m.sg_u +
                    a12 * (m.s_u * m.sg_v + m.s_v * m.sg_u) +
                    a22 * m.s_v * m.sg_v;
      g.a_sgsg[p] = a11 * m.sg_u * m.sg_u + 2.0 * a12 * m.sg_u * m.sg_v +
                    a22 * m.sg_v * m.sg_v;
      g.b_s[p] = pc.b_u * m.s_u + pc.b_v * m.s_v + a11 * m.s_uu +
                 2.0 * a12 * m.s_uv + a22 * m.s_vv;
      g.b_sig[p] = pc.b_u * m.sg_u + pc.b_v * m.sg_v + a11 * m.sg_uu +
                   2.0 * a12 * m.sg_uv + a22 * m.sg_vv;
    }
    // oblique coefficients on sigma = 1, oriented into the domain
    {
      const std::size_t p = g.id(i, ns - 1);
      ObliqueCoeffs o = shock_oblique_coeffs(g.vel(i, ns - 1), inflow, fc);
      const double into = o.I * g.sg_u[p] + o.J * g.sg_v[p];
      if (into > 0.0) {
        o.I = -o.I;
        o.J = -o.J;
      }
      g.obl_I[i] = o.I;
      g.obl_J[i] = o.J;
    }
  }

  auto node_ref = [&](std::size_t i, std::size_t j) {
    NodeRef nr;
    nr.i = i;
    nr.j = j;
    nr.k = g.k_col[i];
    nr.s = i * g.ds;
    nr.sigma = j * g.dsig;
    nr.varrho = g.varrho[g.id(i, j)];
    nr.U = g.vel(i, j);
    return nr;
  };

  g.forcing.resize(n);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < ns; ++j)
      g.forcing[g.id(i, j)] = data.interior_f(node_ref(i, j));

  const double inv_ds2 = 1.0 / (g.ds * g.ds);
  const double inv_dsig2 = 1.0 / (g.dsig * g.dsig);
  const double inv_cross = 1.0 / (4.0 * g.ds * g.dsig);
  const double inv_2ds = 1.0 / (2.0 * g.ds);
  const double inv_2dsig = 1.0 / (2.0 * g.dsig);

  for (std::size_t i = 0; i < nk; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      const std::size_t row = g.id(i, j);
      const bool edge = (i == 0 || i == nk - 1);
      if (edge || j == 0) {
        trips.emplace_back(static_cast<int>(row), static_cast<int>(row), 1.0);
        const NodeRef nr = node_ref(i, j);
        rhs[row] = edge ? data.edge_value(nr) : data.wall_value(nr);
        continue;
      }
      if (j == ns - 1) {
        // oblique row: cs * y_s + csg * y_sigma = shock_rhs
        const std::size_t p = row;
        const double cs = g.obl_I[i] * g.s_u[p] + g.obl_J[i] * g.s_v[p];
        const double csg = g.obl_I[i] * g.sg_u[p] + g.obl_J[i] * g.sg_v[p];
        double scale = std::max({std::abs(cs) * inv_2ds,
                                 std::abs(csg) * 3.0 * inv_2dsig, 1e-300});
        const double as = cs * inv_2ds / scale;
        const double ag = csg * inv_2dsig / scale;
        trips.emplace_back(row, static_cast<int>(g.id(i + 1, j)), as);
        trips.emplace_back(row, static_cast<int>(g.id(i - 1, j)), -as);
        trips.emplace_back(row, static_cast<int>(g.id(i, j)), 3.0 * ag);
        trips.emplace_back(row, static_cast<int>(g.id(i, j - 1)), -4.0 * ag);
        trips.emplace_back(row, static_cast<int>(g.id(i, j - 2)), ag);
        rhs[row] = data.shock_rhs(node_ref(i, j),
                                  ObliqueCoeffs{g.obl_I[i], g.obl_J[i]}) /
                   scale;
        continue;
      }
      // interior 9-point stencil
      const std::size_t p = row;
      const double cC = -2.0 * g.a_ss[p] * inv_ds2 -
                        2.0 * g.a_sgsg[p] * inv_dsig2;
      const double cE = g.a_ss[p] * inv_ds2 + g.b_s[p] * inv_2ds;
      const double cW = g.a_ss[p] * inv_ds2 - g.b_s[p] * inv_2ds;
      const double cN = g.a_sgsg[p] * inv_dsig2 + g.b_sig[p] * inv_2dsig;
      const double cS = g.a_sgsg[p] * inv_dsig2 - g.b_sig[p] * inv_2dsig;
      const double cX = 2.0 * g.a_ssig[p] * inv_cross;
      double scale = std::max({std::abs(cC), std::abs(cE), std::abs(cW),
                               std::abs(cN), std::abs(cS), std::abs(cX),
                               1e-300});
      trips.emplace_back(row, static_cast<int>(g.id(i, j)), cC / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i + 1, j)), cE / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i - 1, j)), cW / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i, j + 1)), cN / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i, j - 1)), cS / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i + 1, j + 1)),
                         cX / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i - 1, j - 1)),
                         cX / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i + 1, j - 1)),
                         -cX / scale);
      trips.emplace_back(row, static_cast<int>(g.id(i - 1, j + 1)),
                         -cX / scale);
      rhs[row] = g.forcing[row] / scale;
    }
  }

  AssembledSystem sys;
  sys.grid = grid;
  sys.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.A.makeCompressed();
  sys.rhs = std::move(rhs);
  return sys;
}

struct Deriv2 {
  double y_u = 0, y_v = 0;
  double y_uu = 0, y_uv = 0, y_vv = 0;
};

class FieldGrid {
 public:
  FieldGrid(std::shared_ptr<StripGrid> grid, Eigen::VectorXd y)
      : grid_(std::move(grid)), y_(std::move(y)) {}

  const StripGrid& grid() const { return *grid_; }
  std::shared_ptr<const StripGrid> grid_ptr() const { return grid_; }
  double value(std::size_t i, std::size_t j) const {
    return y_[static_cast<Eigen::Index>(grid_->id(i, j))];
  }
  double k_at(std::size_t i) const { return grid_->k_col[i]; }
  std::size_t nk() const { return grid_->spec.nk; }
  std::size_t nsigma() const { return grid_->spec.nsigma; }

  /// All first and second (u,v)-derivatives at a node; FD in (s, sigma)
  /// chained through the exact metric, one-sided at boundaries.
  Deriv2 derivatives(std::size_t i, std::size_t j) const {
    ensure_derivs();
    const std::size_t p = grid_->id(i, j);
    return {du_[p], dv_[p], duu_[p], duv_[p], dvv_[p]};
  }

  /// Derivatives at the node nearest to (k, sigma).
  Deriv2 derivatives_at(double k, double sigma) const {
    const auto [i, j] = nearest_node(k, sigma);
    return derivatives(i, j);
  }

  std::pair<std::size_t, std::size_t> nearest_node(double k,
                                                   double sigma) const {
    const StripDomain& dom = grid_->dom;
    if (k < dom.k_lo() - 1e-12 || k > dom.k_hi() + 1e-12 || sigma < -1e-12 ||
        sigma > 1.0 + 1e-12)
      throw OutOfDomain("FieldGrid: (k, sigma) outside the strip");
    const double s = dom.s_of_k(std::clamp(k, dom.k_lo(), dom.k_hi()));
    const auto i = static_cast<std::size_t>(
        std::llround(std::clamp(s, 0.0, 1.0) / grid_->ds));
    const auto j = static_cast<std::size_t>(
        std::llround(std::clamp(sigma, 0.0, 1.0) / grid_->dsig));
    return {std::min(i, grid_->spec.nk - 1),
            std::min(j, grid_->spec.nsigma - 1)};
  }

  /// d/ds and d/dsigma of an arbitrary nodal array at (i, j): 4th-order
  /// centered where the stencil fits (the grading map has strong curvature,
  /// so the extra order buys a much smaller constant), 2nd-order otherwise.
  template <class Getter>
  std::pair<double, double> grid_deriv(Getter&& get, std::size_t i,
                                       std::size_t j) const {
    const std::size_t nk = grid_->spec.nk, ns = grid_->spec.nsigma;
    // The wide stencil is only used where it cannot touch lower-order
    // boundary values (repeated application would otherwise smear their
    // error inward with 1/h amplification).
    auto along = [](auto&& f, std::size_t c, std::size_t n, double h) {
      if (c >= 4 && c + 5 <= n)
        return (-f(c + 2) + 8.0 * f(c + 1) - 8.0 * f(c - 1) + f(c - 2)) /
               (12.0 * h);
      if (c == 0)
        return (-3.0 * f(c) + 4.0 * f(c + 1) - f(c + 2)) / (2.0 * h);
      if (c == n - 1)
        return (3.0 * f(c) - 4.0 * f(c - 1) + f(c - 2)) / (2.0 * h);
      return (f(c + 1) - f(c - 1)) / (2.0 * h);
    };
    const double ds = along([&](std::size_t c) { return get(c, j); }, i, nk,
                            grid_->ds);
    const double dg = along([&](std::size_t c) { return get(i, c); }, j, ns,
                            grid_->dsig);
    return {ds, dg};
  }

 private:
  // second difference along one index, one-sided 4-point at the ends
  template <class F>
  static double second_diff(F&& f, std::size_t c, std::size_t n, double h) {
    if (c >= 2 && c + 3 <= n)  // 4th-order centered where it fits cleanly
      return (-f(c + 2) + 16.0 * f(c + 1) - 30.0 * f(c) + 16.0 * f(c - 1) -
              f(c - 2)) /
             (12.0 * h * h);
    if (c == 0)
      return (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h);
    if (c == n - 1)
      return (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) /
             (h * h);
    return (f(c + 1) - 2.0 * f(c) + f(c - 1)) / (h * h);
  }

  void ensure_derivs() const {
    if (!du_.empty()) return;
    const StripGrid& g = *grid_;
    const std::size_t nk = g.spec.nk, ns = g.spec.nsigma, n = g.n();
    du_.resize(n);
    dv_.resize(n);
    duu_.resize(n);
    duv_.resize(n);
    dvv_.resize(n);
    auto getY = [&](std::size_t i, std::size_t j) { return value(i, j); };
    for (std::size_t i = 0; i < nk; ++i)
      for (std::size_t j = 0; j < ns; ++j) {
        const std::size_t p = g.id(i, j);
        const auto [ys, yg] = grid_deriv(getY, i, j);
        du_[p] = g.s_u[p] * ys + g.sg_u[p] * yg;
        dv_[p] = g.s_v[p] * ys + g.sg_v[p] * yg;
      }
    // Second derivatives from the tangential rate of change of the gradient
    // along the sigma-level lines plus the equation itself. Differencing
    // the y-gradient across the strip would multiply its O(h^2) error by
    // the 1/width metric; this route stays well-conditioned as the strip
    // collapses.
    auto getU = [&](std::size_t i, std::size_t j) { return du_[g.id(i, j)]; };
    auto getV = [&](std::size_t i, std::size_t j) { return dv_[g.id(i, j)]; };
    const FlowConstants& fc = g.dom.constants();
    for (std::size_t i = 0; i < nk; ++i)
      for (std::size_t j = 0; j < ns; ++j) {
        const std::size_t p = g.id(i, j);
        const double dyu_ds = grid_deriv(getU, i, j).first;
        const double dyv_ds = grid_deriv(getV, i, j).first;
        const PdeCoeffs pc = interior_coeffs(g.vel(i, j), fc);
        const std::array<std::array<double, 3>, 3> A{{
            {{g.u_s[p], g.v_s[p], 0.0}},
            {{0.0, g.u_s[p], g.v_s[p]}},
            {{pc.a_uu, pc.a_uv, pc.a_vv}},
        }};
        const std::array<double, 3> rhs{
            dyu_ds, dyv_ds,
            g.forcing[p] - pc.b_u * du_[p] - pc.b_v * dv_[p]};
        const auto x = num::solve_dense<3>(A, rhs);
        duu_[p] = x[0];
        duv_[p] = x[1];
        dvv_[p] = x[2];
      }
  }

  std::shared_ptr<StripGrid> grid_;
  Eigen::VectorXd y_;
  mutable std::vector<double> du_, dv_, duu_, duv_, dvv_;
};

/// Direct sparse factorization of the assembled system.
inline FieldGrid solve(const AssembledSystem& sys) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(sys.A);
  lu.factorize(sys.A);
  if (lu.info() != Eigen::Success)
    throw SolverBreakdown("solve: sparse factorization failed");
  Eigen::VectorXd y = lu.solve(sys.rhs);
  if (lu.info() != Eigen::Success)
    throw SolverBreakdown("solve: back substitution failed");
  const double res = (sys.A * y - sys.rhs).cwiseAbs().maxCoeff();
  const double scale = std::max(sys.rhs.cwiseAbs().maxCoeff(), 1e-300);
  if (res > 1e-10 * scale)
    throw SolverBreakdown("solve: residual above 1e-10 of the data");
  return FieldGrid(sys.grid, std::move(y));
}

}  // namespace hodoshock
