#pragma once

// Reconstruction of the physical x-coordinate from the solved y-field by
// path integration of (x_u, x_v) over the grid graph, plus the geometry
// exports (wall and shock curves in the physical plane) and the map
// invertibility check.

#include <cmath>
#include <memory>
#include <vector>

#include "hodoshock/bvp_solver.hpp"
#include "hodoshock/hodograph_pde.hpp"

namespace hodoshock {

struct PhysicalField {
  std::shared_ptr<const StripGrid> grid;
  std::vector<double> x;          // per node, gauge-normalized
  std::vector<double> y;          // the solved field values
  std::vector<double> x_u, x_v;   // gradient of x in the hodograph plane
  std::vector<double> y_u, y_v;   // gradient of y
  std::vector<double> jac;        // x_u y_v - x_v y_u per node
  std::vector<double> curl;       // discrete (x_u)_v - (x_v)_u per node
  std::size_t gauge_i = 0, gauge_j = 0;
  double path_residual = 0;       // row-first vs column-first integration
};

/// Integrate (x_s, x_sigma) along grid lines from the gauge node (x = 0
/// there) with the trapezoid rule; the alternative path ordering is kept as
/// a consistency residual.
inline PhysicalField integrate_x(const FieldGrid& F, std::size_t gauge_i,
                                 std::size_t gauge_j,
                                 const FlowConstants& fc) {
  const StripGrid& g = F.grid();
  const std::size_t nk = g.spec.nk, ns = g.spec.nsigma, n = g.n();
  PhysicalField P;
  P.grid = F.grid_ptr();
  P.gauge_i = gauge_i;
  P.gauge_j = gauge_j;
  P.x.assign(n, 0.0);
  P.y.resize(n);
  P.x_u.resize(n);
  P.x_v.resize(n);
  P.y_u.resize(n);
  P.y_v.resize(n);
  P.jac.resize(n);
  P.curl.resize(n);

  std::vector<double> xs(n), xsig(n);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < ns; ++j) {
      const std::size_t p = g.id(i, j);
      P.y[p] = F.value(i, j);
      const Deriv2 d = F.derivatives(i, j);
      const XGradient xg = x_gradient_from_y(g.vel(i, j), d.y_u, d.y_v, fc);
      P.x_u[p] = xg.x_u;
      P.x_v[p] = xg.x_v;
      P.y_u[p] = d.y_u;
      P.y_v[p] = d.y_v;
      P.jac[p] = xg.x_u * d.y_v - xg.x_v * d.y_u;
      xs[p] = xg.x_u * g.u_s[p] + xg.x_v * g.v_s[p];
      xsig[p] = xg.x_u * g.u_sg[p] + xg.x_v * g.v_sg[p];
    }

  auto trapz_row = [&](std::vector<double>& out, std::size_t j) {
    // integrate xs along the row from the gauge column
    for (std::size_t i = gauge_i; i + 1 < nk; ++i)
      out[g.id(i + 1, j)] = out[g.id(i, j)] +
                            0.5 * (xs[g.id(i, j)] + xs[g.id(i + 1, j)]) * g.ds;
    for (std::size_t i = gauge_i; i > 0; --i)
      out[g.id(i - 1, j)] = out[g.id(i, j)] -
                            0.5 * (xs[g.id(i, j)] + xs[g.id(i - 1, j)]) * g.ds;
  };
  auto trapz_col = [&](std::vector<double>& out, std::size_t i) {
    for (std::size_t j = gauge_j; j + 1 < ns; ++j)
      out[g.id(i, j + 1)] = out[g.id(i, j)] + 0.5 * (xsig[g.id(i, j)] +
                                                     xsig[g.id(i, j + 1)]) *
                                                  g.dsig;
    for (std::size_t j = gauge_j; j > 0; --j)
      out[g.id(i, j - 1)] = out[g.id(i, j)] - 0.5 * (xsig[g.id(i, j)] +
                                                     xsig[g.id(i, j - 1)]) *
                                                  g.dsig;
  };

  // row-first: along the gauge row, then up/down each column
  trapz_row(P.x, gauge_j);
  for (std::size_t i = 0; i < nk; ++i) trapz_col(P.x, i);

  // column-first alternative for the path-independence residual
  std::vector<double> alt(n, 0.0);
  trapz_col(alt, gauge_i);
  for (std::size_t j = 0; j < ns; ++j) trapz_row(alt, j);
  double res = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    res = std::max(res, std::abs(P.x[p] - alt[p]));
  P.path_residual = res;

  // discrete curl of (x_u, x_v) by grid differencing (independent of the
  // compatibility identity built into the derivative evaluator)
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < ns; ++j) {
      const std::size_t p = g.id(i, j);
      const auto [as, ag] = F.grid_deriv(
          [&](std::size_t a, std::size_t b) { return P.x_u[g.id(a, b)]; }, i,
          j);
      const auto [bs, bg] = F.grid_deriv(
          [&](std::size_t a, std::size_t b) { return P.x_v[g.id(a, b)]; }, i,
          j);
      const double xu_v = g.s_v[p] * as + g.sg_v[p] * ag;
      const double xv_u = g.s_u[p] * bs + g.sg_u[p] * bg;
      P.curl[p] = xu_v - xv_u;
    }
  return P;
}

inline PhysicalField integrate_x(const FieldGrid& F,
                                 const FlowConstants& fc) {
  return integrate_x(F, F.nk() / 2, 0, fc);
}

struct GeometryRow {
  double k = 0, x = 0, y = 0, u = 0, v = 0;
};

struct GeometryExport {
  std::vector<GeometryRow> wall;   // image of sigma = 0
  std::vector<GeometryRow> shock;  // image of sigma = 1
  std::vector<double> slip_residual;  // |u - v dx/dy| along the wall
  double slip_sup = 0;
  double curve_distance_sup = 0;  // max pointwise wall-shock distance
};

inline GeometryExport export_geometry(const PhysicalField& P) {
  const StripGrid& g = *P.grid;
  const std::size_t nk = g.spec.nk, ns = g.spec.nsigma;
  GeometryExport out;
  out.wall.resize(nk);
  out.shock.resize(nk);
  out.slip_residual.resize(nk);
  const WallProfile& W = g.dom.wall();
  for (std::size_t i = 0; i < nk; ++i) {
    const std::size_t pw = g.id(i, 0), psh = g.id(i, ns - 1);
    out.wall[i] = {g.k_col[i], P.x[pw], P.y[pw], g.u[pw], g.v[pw]};
    out.shock[i] = {g.k_col[i], P.x[psh], P.y[psh], g.u[psh], g.v[psh]};
    // slip: dx/dy along the wall, with dy/dk = B'(k) exact
    const double xs = P.x_u[pw] * g.u_s[pw] + P.x_v[pw] * g.v_s[pw];
    const double dxdk = xs * g.dom.ds_dk(g.k_col[i]);
    const double dydk = W.Bp(g.k_col[i]);
    const double slip = std::abs(g.u[pw] - g.v[pw] * dxdk / dydk);
    out.slip_residual[i] = slip;
    out.slip_sup = std::max(out.slip_sup, slip);
    out.curve_distance_sup =
        std::max(out.curve_distance_sup,
                 std::hypot(P.x[psh] - P.x[pw], P.y[psh] - P.y[pw]));
  }
  return out;
}

struct JacobianReport {
  bool single_signed = false;
  double min_abs = 0;
  double min_val = 0, max_val = 0;
};

/// Invertibility of (u, v) -> (x, y) on interior nodes.
inline JacobianReport jacobian_check(const PhysicalField& P) {
  const StripGrid& g = *P.grid;
  JacobianReport r;
  double mn = std::numeric_limits<double>::infinity(), mx = -mn, mna = mn;
  for (std::size_t i = 1; i + 1 < g.spec.nk; ++i)
    for (std::size_t j = 1; j + 1 < g.spec.nsigma; ++j) {
      const double d = P.jac[g.id(i, j)];
      mn = std::min(mn, d);
      mx = std::max(mx, d);
      mna = std::min(mna, std::abs(d));
    }
  r.min_val = mn;
  r.max_val = mx;
  r.min_abs = mna;
  r.single_signed = (mn > 0.0) || (mx < 0.0);
  return r;
}

}  // namespace hodoshock
