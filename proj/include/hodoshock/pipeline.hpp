#pragma once

// Orchestration: one (eps, grid) solve with all diagnostics, the grid
// refinement control used by the eps-sweep, artifact writers, and the sweep
// driver itself.

#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodoshock/config.hpp"
#include "hodoshock/diagnostics.hpp"
#include "hodoshock/identity_suite.hpp"
#include "hodoshock/physical_map.hpp"
#include "hodoshock/pipeline_io.hpp"

namespace hodoshock {

struct PointArtifacts {
  double eps = 0;
  std::unique_ptr<WallProfile> wall;
  std::unique_ptr<GammaCurve> curve;
  std::unique_ptr<FieldGrid> field;
  std::unique_ptr<PhysicalField> phys;
  ResidualReport residual;
  PerturbationReport perturbation;
  GeometryExport geometry;
  JacobianReport jacobian;
  std::vector<CheckItem> signs;
  StripGridSpec grid_used;
  std::size_t refinements = 0;
  std::vector<std::pair<StripGridSpec, double>> refine_history;
};

inline WallProfile make_wall(const RunConfig& cfg) {
  if (cfg.wall.kind == "pure-tail")
    return make_pure_tail_profile(cfg.wall.flat, cfg.wall.sharp,
                                  cfg.wall.alpha, cfg.wall.delta);
  return make_blended_profile(cfg.wall.flat, cfg.wall.sharp, cfg.wall.alpha,
                              cfg.wall.delta);
}

inline WallDataMode edge_mode_of(const RunConfig& cfg) {
  return cfg.edge_mode == "bn-cap" ? WallDataMode::bn_cap
                                   : WallDataMode::truncate;
}

/// One full solve at a fixed grid with all diagnostics attached.
inline PointArtifacts run_point(const RunConfig& cfg, double eps,
                                const StripGridSpec& spec) {
  const FlowConstants fc(cfg.q_bar);
  PointArtifacts art;
  art.eps = eps;
  art.grid_used = spec;
  art.wall = std::make_unique<WallProfile>(make_wall(cfg));
  art.curve = std::make_unique<GammaCurve>(
      solve_gamma_ode(*art.wall, eps, fc, GammaGrid{cfg.gamma_knots}));
  const StripDomain dom = build_domain(*art.wall, eps, *art.curve, fc,
                                       cfg.eta_l(), cfg.eta_r());
  const ProblemData data = default_problem(dom, edge_mode_of(cfg));
  art.field = std::make_unique<FieldGrid>(solve(assemble(dom, spec, data)));
  art.residual = boundary_residual(*art.field, *art.curve, *art.wall, eps, fc);
  art.perturbation = perturbation_check(*art.field, *art.wall, eps, fc);
  art.phys = std::make_unique<PhysicalField>(integrate_x(*art.field, fc));
  art.geometry = export_geometry(*art.phys);
  art.jacobian = jacobian_check(*art.phys);
  art.signs = structural_signs(*art.wall, eps, fc, &art.field->grid());
  return art;
}

inline PointArtifacts run_point(const RunConfig& cfg, double eps) {
  return run_point(cfg, eps, StripGridSpec{cfg.grid.nk, cfg.grid.nsigma});
}

/// Refine the grid until the sup-residual settles (so that the reported
/// residual measures the construction, not the discretization).
inline PointArtifacts run_point_refined(const RunConfig& cfg, double eps) {
  StripGridSpec spec{cfg.grid.nk, cfg.grid.nsigma};
  PointArtifacts art = run_point(cfg, eps, spec);
  art.refine_history.push_back({spec, art.residual.sup_residual});
  for (std::size_t r = 0; r < cfg.sweep.max_refine; ++r) {
    if (spec.nk * 2 > cfg.sweep.nk_cap) break;
    StripGridSpec next{spec.nk * 2,
                       std::min(cfg.sweep.nsigma_cap, spec.nsigma * 3 / 2)};
    PointArtifacts fine = run_point(cfg, eps, next);
    fine.refinements = art.refinements + 1;
    fine.refine_history = std::move(art.refine_history);
    fine.refine_history.push_back({next, fine.residual.sup_residual});
    const double change =
        std::abs(fine.residual.sup_residual - art.residual.sup_residual) /
        std::max(art.residual.sup_residual, 1e-300);
    art = std::move(fine);
    spec = next;
    if (change < cfg.sweep.sup_change_tol) break;
  }
  return art;
}

struct SweepResult {
  std::vector<PointArtifacts> points;
  double fit_slope = 0;
};

/// Refinement-controlled solves across the eps list plus the order fit.
/// Points are dispatched to a small worker pool and merged in list order.
inline SweepResult run_sweep(const RunConfig& cfg) {
  if (cfg.eps.size() < 3)
    throw InsufficientData("run_sweep: need at least three eps values");
  SweepResult out;
  out.points.resize(cfg.eps.size());
  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  for (std::size_t base = 0; base < cfg.eps.size(); base += workers) {
    std::vector<std::future<PointArtifacts>> batch;
    const std::size_t hi = std::min(cfg.eps.size(), base + workers);
    for (std::size_t i = base; i < hi; ++i)
      batch.push_back(std::async(std::launch::async, [&cfg, i] {
        return run_point_refined(cfg, cfg.eps[i]);
      }));
    for (std::size_t i = base; i < hi; ++i)
      out.points[i] = batch[i - base].get();
  }
  std::vector<ResidualReport> reps;
  for (const auto& p : out.points) reps.push_back(p.residual);
  out.fit_slope = order_fit(reps);
  return out;
}

// ---------------------------------------------------------------------------
// report assembly

inline nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["q_bar"] = cfg.q_bar;
  j["wall"] = {{"flat", cfg.wall.flat},
               {"sharp", cfg.wall.sharp},
               {"alpha", cfg.wall.alpha},
               {"delta", cfg.wall.delta},
               {"kind", cfg.wall.kind}};
  j["eps"] = cfg.eps;
  j["grid"] = {{"nk", cfg.grid.nk}, {"nsigma", cfg.grid.nsigma}};
  j["truncation"] = {{"eta_l", cfg.eta_l()}, {"eta_r", cfg.eta_r()}};
  j["gamma_knots"] = cfg.gamma_knots;
  j["edge_mode"] = cfg.edge_mode;
  j["sweep"] = {{"max_refine", cfg.sweep.max_refine},
                {"sup_change_tol", cfg.sweep.sup_change_tol},
                {"nk_cap", cfg.sweep.nk_cap},
                {"nsigma_cap", cfg.sweep.nsigma_cap}};
  j["workers"] = cfg.workers;
  j["out_dir"] = cfg.out_dir;
  return j;
}

inline nlohmann::json checks_json(const std::vector<CheckItem>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}});
  return arr;
}

inline nlohmann::json point_report_json(const RunConfig& cfg,
                                        const PointArtifacts& art) {
  nlohmann::json j;
  j["eps"] = art.eps;
  j["sup_residual"] = art.residual.sup_residual;
  j["weighted_sup"] = art.residual.weighted_sup;
  j["fit_slope"] = nullptr;  // per-point report; the sweep carries the fit
  j["checks"] = checks_json(art.signs);
  j["grid"] = {{"nk", art.grid_used.nk}, {"nsigma", art.grid_used.nsigma}};
  j["two_form_gap_max"] = art.residual.two_form_gap_max;
  j["perturbation"] = {{"ratio_value", art.perturbation.ratio_value},
                       {"ratio_gradient", art.perturbation.ratio_gradient},
                       {"betas", art.perturbation.betas},
                       {"ratio_hessian", art.perturbation.ratio_hessian}};
  j["jacobian"] = {{"single_signed", art.jacobian.single_signed},
                   {"min_abs", art.jacobian.min_abs},
                   {"min", art.jacobian.min_val},
                   {"max", art.jacobian.max_val}};
  j["geometry"] = {{"slip_sup", art.geometry.slip_sup},
                   {"curve_distance_sup", art.geometry.curve_distance_sup},
                   {"path_residual", art.phys ? art.phys->path_residual : 0.0}};
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [spec, sup] : art.refine_history)
    hist.push_back(
        {{"nk", spec.nk}, {"nsigma", spec.nsigma}, {"sup_residual", sup}});
  j["refine_history"] = hist;
  j["config"] = config_json(cfg);
  return j;
}

inline nlohmann::json sweep_report_json(const RunConfig& cfg,
                                        const SweepResult& sweep) {
  nlohmann::json j;
  j["eps"] = nlohmann::json::array();
  j["sup_residual"] = nlohmann::json::array();
  j["weighted_sup"] = nlohmann::json::array();
  for (const auto& p : sweep.points) {
    j["eps"].push_back(p.eps);
    j["sup_residual"].push_back(p.residual.sup_residual);
    j["weighted_sup"].push_back(p.residual.weighted_sup);
  }
  j["fit_slope"] = sweep.fit_slope;
  nlohmann::json checks = nlohmann::json::array();
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : sweep.points)
    points.push_back(point_report_json(cfg, p));
  j["points"] = points;
  j["checks"] = checks;
  j["config"] = config_json(cfg);
  return j;
}

/// Per-eps artifact directory name, stable across runs.
inline std::string eps_dir_name(double eps) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "eps_%.3e", eps);
  return buf;
}

inline void write_point_artifacts(const RunConfig& cfg,
                                  const PointArtifacts& art,
                                  const std::string& dir) {
  std::filesystem::create_directories(dir);
  io::write_gamma_csv(dir + "/gamma.csv", *art.curve);
  io::write_solution_csv(dir + "/solution.csv", *art.field);
  io::write_residuals_csv(dir + "/residuals.csv", art.residual);
  io::write_geometry_csv(dir + "/wall.csv", art.geometry.wall);
  io::write_geometry_csv(dir + "/shock.csv", art.geometry.shock);
  std::ofstream rep(dir + "/report.json");
  rep << point_report_json(cfg, art).dump(2) << "\n";
}

}  // namespace hodoshock
