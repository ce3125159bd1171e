#pragma once

// CSV writers for the exported artifacts. All numbers use %.17g so reruns
// are byte-identical.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hodoshock/bvp_solver.hpp"
#include "hodoshock/diagnostics.hpp"
#include "hodoshock/errors.hpp"
#include "hodoshock/gamma_boundary.hpp"
#include "hodoshock/limit_solution.hpp"
#include "hodoshock/physical_map.hpp"
#include "hodoshock/slope_field.hpp"
#include "hodoshock/wall_profile.hpp"

namespace hodoshock::io {

namespace detail {
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CsvFile {
  std::ofstream out;
  explicit CsvFile(const std::string& path, const std::string& header)
      : out(path) {
    if (!out) throw BadState("cannot open " + path + " for writing");
    out << header << "\n";
  }
  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      out << (i ? "," : "") << fmt(vals[i]);
    out << "\n";
  }
};
}  // namespace detail

inline void write_profile_csv(const std::string& path, const WallProfile& W,
                              std::size_t n = 512) {
  detail::CsvFile f(path, "k,B,Bp,Bpp");
  const double span = W.sharp() - W.flat();
  for (std::size_t i = 0; i < n; ++i) {
    const double k = W.flat() + span * (1.0 - 1e-9) * i / (n - 1);
    const WallEval e = W.eval(k);
    f.row({k, e.B, e.Bp, e.Bpp});
  }
}

inline void write_limit_jets_csv(const std::string& path,
                                 const WallProfile& W,
                                 const FlowConstants& fc,
                                 std::size_t n = 512) {
  detail::CsvFile f(path, "k,Ups_u,Ups_v,Ups_uu,Ups_uv,Ups_vv");
  const double span = W.sharp() - W.flat();
  for (std::size_t i = 0; i < n; ++i) {
    const double k = W.flat() + span * (1.0 - 1e-9) * i / (n - 1);
    const UpsilonJet j = upsilon_jet(k, W, fc);
    f.row({k, j.y_u, j.y_v, j.y_uu, j.y_uv, j.y_vv});
  }
}

inline void write_slope_csv(const std::string& path, const WallProfile& W,
                            const FlowConstants& fc, std::size_t n = 512) {
  detail::CsvFile f(path, "k,H,h0,dF_limit,dFg_limit");
  const double span = W.sharp() - W.flat();
  for (std::size_t i = 0; i < n; ++i) {
    const double k = W.flat() + span * (1.0 - 1e-9) * i / (n - 1);
    f.row({k, H_of(k, fc), h_of(k, 0.0, fc), dF_limit(k, W, fc),
           dFg_limit(k, fc)});
  }
}

inline void write_gamma_csv(const std::string& path,
                            const GammaCurve& curve) {
  detail::CsvFile f(path, "k,Gamma,dGamma,gap,lower_bound_ratio");
  const double pi = 3.14159265358979323846;
  const double span = curve.sharp() - curve.flat();
  const auto& ks = curve.knots();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double s = std::sin(pi * (ks[i] - curve.flat()) / span);
    const double ratio =
        (s > 0.0) ? curve.gap_at(i) / (curve.eps() * s) : 0.0;
    f.row({ks[i], curve.gamma_at(i), curve.dgamma_at(i), curve.gap_at(i),
           ratio});
  }
}

inline void write_solution_csv(const std::string& path, const FieldGrid& F) {
  detail::CsvFile f(path, "k,sigma,u,v,y");
  const StripGrid& g = F.grid();
  for (std::size_t i = 0; i < g.spec.nk; ++i)
    for (std::size_t j = 0; j < g.spec.nsigma; ++j)
      f.row({g.k_col[i], j * g.dsig, g.u[g.id(i, j)], g.v[g.id(i, j)],
             F.value(i, j)});
}

inline void write_residuals_csv(const std::string& path,
                                const ResidualReport& rep) {
  detail::CsvFile f(path, "k,residual_kr,residual_uv,two_form_gap");
  for (const auto& s : rep.samples)
    f.row({s.k, s.r_kr, s.r_uv, s.two_form_gap});
}

inline void write_geometry_csv(const std::string& path,
                               const std::vector<GeometryRow>& rows) {
  detail::CsvFile f(path, "k,x,y,u,v");
  for (const auto& r : rows) f.row({r.k, r.x, r.y, r.u, r.v});
}

}  // namespace hodoshock::io
