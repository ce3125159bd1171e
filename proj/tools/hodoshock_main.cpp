// Command-line driver: identity verification, profile/limit-solution/slope
// exports, free-boundary construction, the strip BVP solve with residual
// diagnostics, the eps-sweep convergence study, and physical-plane geometry.
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hodoshock/pipeline.hpp"

namespace {

using namespace hodoshock;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<double> eps_override;
  std::string grid_override;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--eps", opts.eps_override,
                  "mass-flux value(s), overrides the config list");
  cmd->add_option("--grid", opts.grid_override, "grid as NKxNS, e.g. 256x32");
}

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg;
  if (!opts.config_path.empty()) cfg = parse_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (!opts.eps_override.empty()) cfg.eps = opts.eps_override;
  if (!opts.grid_override.empty()) {
    const auto x = opts.grid_override.find('x');
    if (x == std::string::npos)
      throw ConfigError("--grid expects NKxNS, e.g. 256x32");
    cfg.grid.nk = std::stoul(opts.grid_override.substr(0, x));
    cfg.grid.nsigma = std::stoul(opts.grid_override.substr(x + 1));
  }
  validate_config(cfg);
  return cfg;
}

void ensure_out(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
}

int cmd_verify_identities(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out(cfg);
  const IdentityReport rep = run_identity_suite();
  nlohmann::json j;
  j["all_pass"] = rep.all_pass;
  j["seconds"] = rep.seconds;
  j["items"] = nlohmann::json::array();
  for (const auto& it : rep.items) {
    j["items"].push_back(
        {{"name", it.name}, {"pass", it.pass}, {"note", it.note}});
    std::printf("%-4s %s%s%s\n", it.pass ? "ok" : "FAIL", it.name.c_str(),
                it.note.empty() ? "" : "  -- ", it.note.c_str());
  }
  std::ofstream out(cfg.out_dir + "/identities.json");
  out << j.dump(2) << "\n";
  std::printf("identity suite: %zu items, %.3f s, %s\n", rep.items.size(),
              rep.seconds, rep.all_pass ? "all pass" : "FAILURES");
  return rep.all_pass ? 0 : 1;
}

int cmd_profile(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out(cfg);
  const FlowConstants fc(cfg.q_bar);
  const WallProfile W = make_wall(cfg);
  io::write_profile_csv(cfg.out_dir + "/profile.csv", W);
  io::write_limit_jets_csv(cfg.out_dir + "/limit_jets.csv", W, fc);
  io::write_slope_csv(cfg.out_dir + "/slope.csv", W, fc);
  const WallValidationReport rep = validate(W);
  for (const auto& msg : rep.failures)
    std::printf("profile check failed: %s\n", msg.c_str());
  std::printf("profile: kind=%s, [%g, %g), alpha=%g, delta=%g -> %s\n",
              cfg.wall.kind.c_str(), cfg.wall.flat, cfg.wall.sharp,
              cfg.wall.alpha, cfg.wall.delta, rep.ok ? "valid" : "INVALID");
  return rep.ok ? 0 : 1;
}

int cmd_gamma(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out(cfg);
  const FlowConstants fc(cfg.q_bar);
  const WallProfile W = make_wall(cfg);
  for (double eps : cfg.eps) {
    const GammaCurve curve =
        solve_gamma_ode(W, eps, fc, GammaGrid{cfg.gamma_knots});
    const std::string dir = cfg.out_dir + "/" + eps_dir_name(eps);
    std::filesystem::create_directories(dir);
    io::write_gamma_csv(dir + "/gamma.csv", curve);
    std::printf("eps=%g: gamma on %zu knots, lower-bound ratio %.6g\n", eps,
                curve.knots().size(), check_gamma_lower_bound(curve));
  }
  return 0;
}

int run_points(const CommonOpts& opts, bool with_residual_print) {
  RunConfig cfg = load_config(opts);
  ensure_out(cfg);
  for (double eps : cfg.eps) {
    const PointArtifacts art = run_point(cfg, eps);
    const std::string dir = cfg.out_dir + "/" + eps_dir_name(eps);
    write_point_artifacts(cfg, art, dir);
    if (with_residual_print)
      std::printf("eps=%g grid=%zux%zu sup_residual=%.6e weighted=%.6e\n",
                  eps, art.grid_used.nk, art.grid_used.nsigma,
                  art.residual.sup_residual, art.residual.weighted_sup);
    else
      std::printf("eps=%g grid=%zux%zu solved, artifacts in %s\n", eps,
                  art.grid_used.nk, art.grid_used.nsigma, dir.c_str());
  }
  return 0;
}

int cmd_solve(const CommonOpts& opts) { return run_points(opts, false); }
int cmd_residuals(const CommonOpts& opts) { return run_points(opts, true); }

int cmd_geometry(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out(cfg);
  for (double eps : cfg.eps) {
    const PointArtifacts art = run_point(cfg, eps);
    const std::string dir = cfg.out_dir + "/" + eps_dir_name(eps);
    std::filesystem::create_directories(dir);
    io::write_geometry_csv(dir + "/wall.csv", art.geometry.wall);
    io::write_geometry_csv(dir + "/shock.csv", art.geometry.shock);
    std::printf(
        "eps=%g slip_sup=%.4e wall-shock distance=%.4e jacobian %s "
        "(min |J| = %.4e)\n",
        eps, art.geometry.slip_sup, art.geometry.curve_distance_sup,
        art.jacobian.single_signed ? "single-signed" : "SIGN CHANGE",
        art.jacobian.min_abs);
  }
  return 0;
}

int cmd_sweep(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out(cfg);
  const SweepResult sweep = run_sweep(cfg);
  for (const auto& p : sweep.points) {
    write_point_artifacts(cfg, p,
                          cfg.out_dir + "/" + eps_dir_name(p.eps));
    std::printf("eps=%-10g grid=%zux%-4zu sup_residual=%.6e\n", p.eps,
                p.grid_used.nk, p.grid_used.nsigma,
                p.residual.sup_residual);
  }
  std::ofstream out(cfg.out_dir + "/sweep.json");
  out << sweep_report_json(cfg, sweep).dump(2) << "\n";
  {
    std::ofstream csv(cfg.out_dir + "/sweep.csv");
    csv << "eps,sup_residual,weighted_sup,nk,nsigma\n";
    for (const auto& p : sweep.points) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%zu,%zu\n", p.eps,
                    p.residual.sup_residual, p.residual.weighted_sup,
                    p.grid_used.nk, p.grid_used.nsigma);
      csv << buf;
    }
  }
  std::printf("fitted slope of log sup-residual vs log eps: %.4f\n",
              sweep.fit_slope);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate transonic-shock construction in the hodograph "
               "plane (gamma = 2)"};
  app.require_subcommand(1);

  CommonOpts opts;
  add_common(app.add_subcommand("verify-identities",
                                "run the exact identity suite"),
             opts);
  add_common(app.add_subcommand("profile", "build and export the wall data"),
             opts);
  add_common(app.add_subcommand("gamma", "construct the free boundary"),
             opts);
  add_common(app.add_subcommand("solve", "solve the strip problem per eps"),
             opts);
  add_common(app.add_subcommand("residuals",
                                "solve and report boundary residuals"),
             opts);
  add_common(app.add_subcommand("sweep",
                                "eps-sweep with refinement control and "
                                "order fit"),
             opts);
  add_common(app.add_subcommand("geometry",
                                "export physical wall and shock curves"),
             opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "verify-identities") return cmd_verify_identities(opts);
    if (sub == "profile") return cmd_profile(opts);
    if (sub == "gamma") return cmd_gamma(opts);
    if (sub == "solve") return cmd_solve(opts);
    if (sub == "residuals") return cmd_residuals(opts);
    if (sub == "sweep") return cmd_sweep(opts);
    if (sub == "geometry") return cmd_geometry(opts);
    std::fprintf(stderr, "unknown subcommand\n");
    return 2;
  } catch (const hodoshock::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const hodoshock::Error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
