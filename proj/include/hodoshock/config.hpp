#pragma once

// Run configuration: a flat key = value text format with dotted keys, plus
// validation against the module preconditions.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hodoshock/errors.hpp"

namespace hodoshock {

struct RunConfig {
  double q_bar = 1.0;

  struct {
    double flat = 0.15;
    double sharp = 0.65;
    double alpha = 1.0;
    double delta = 0.1;
    std::string kind = "blended";  // blended | pure-tail
  } wall;

  std::vector<double> eps{1e-2, 3e-3, 1e-3, 3e-4};

  struct {
    std::size_t nk = 256;
    std::size_t nsigma = 32;
  } grid;

  struct {
    double eta_l = -1.0;  // negative: default to 0.02 * (sharp - flat)
    double eta_r = -1.0;
  } truncation;

  std::size_t gamma_knots = 512;
  std::string edge_mode = "truncate";  // truncate | bn-cap

  struct {
    std::size_t max_refine = 3;
    double sup_change_tol = 0.10;
    std::size_t nk_cap = 4096;
    std::size_t nsigma_cap = 64;
  } sweep;

  std::size_t workers = 1;
  std::string out_dir = "out";

  double eta_l() const {
    return truncation.eta_l > 0.0 ? truncation.eta_l
                                  : 0.02 * (wall.sharp - wall.flat);
  }
  double eta_r() const {
    return truncation.eta_r > 0.0 ? truncation.eta_r
                                  : 0.02 * (wall.sharp - wall.flat);
  }
};

namespace config_detail {
inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double to_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: bad numeric value for " + key + ": " + v);
  return x;
}

inline std::size_t to_size(const std::string& v, const std::string& key) {
  const double x = to_double(v, key);
  if (x < 0 || x != std::floor(x))
    throw ConfigError("config: bad integer value for " + key + ": " + v);
  return static_cast<std::size_t>(x);
}
}  // namespace config_detail

inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
  using config_detail::to_double;
  using config_detail::to_size;
  if (key == "q_bar") cfg.q_bar = to_double(value, key);
  else if (key == "wall.flat") cfg.wall.flat = to_double(value, key);
  else if (key == "wall.sharp") cfg.wall.sharp = to_double(value, key);
  else if (key == "wall.alpha") cfg.wall.alpha = to_double(value, key);
  else if (key == "wall.delta") cfg.wall.delta = to_double(value, key);
  else if (key == "wall.kind") cfg.wall.kind = value;
  else if (key == "eps") {
    cfg.eps.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
      cfg.eps.push_back(to_double(config_detail::trim(item), key));
  } else if (key == "grid.nk") cfg.grid.nk = to_size(value, key);
  else if (key == "grid.nsigma") cfg.grid.nsigma = to_size(value, key);
  else if (key == "truncation.eta_l")
    cfg.truncation.eta_l = to_double(value, key);
  else if (key == "truncation.eta_r")
    cfg.truncation.eta_r = to_double(value, key);
  else if (key == "gamma.knots") cfg.gamma_knots = to_size(value, key);
  else if (key == "edge_mode") cfg.edge_mode = value;
  else if (key == "sweep.max_refine")
    cfg.sweep.max_refine = to_size(value, key);
  else if (key == "sweep.sup_change_tol")
    cfg.sweep.sup_change_tol = to_double(value, key);
  else if (key == "sweep.nk_cap") cfg.sweep.nk_cap = to_size(value, key);
  else if (key == "sweep.nsigma_cap")
    cfg.sweep.nsigma_cap = to_size(value, key);
  else if (key == "workers") cfg.workers = to_size(value, key);
  else if (key == "out_dir") cfg.out_dir = value;
  else throw ConfigError("config: unknown key " + key);
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  RunConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = config_detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: missing '=' at line " +
                        std::to_string(lineno));
    apply_config_entry(cfg, config_detail::trim(line.substr(0, eq)),
                       config_detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline void validate_config(const RunConfig& cfg) {
  if (!(cfg.q_bar > 0.0)) throw ConfigError("config: q_bar must be > 0");
  const double bound = std::sqrt(0.5);
  if (!(cfg.wall.flat > 0.0 && cfg.wall.flat < cfg.wall.sharp &&
        cfg.wall.sharp < bound))
    throw ConfigError(
        "config: wall slopes must satisfy 0 < flat < sharp < "
        "sqrt((gamma-1)/2) = sqrt(1/2), the subsonic-arc bound for "
        "gamma = 2");
  if (!(cfg.wall.alpha > 0.0))
    throw ConfigError("config: wall.alpha must be > 0");
  if (!(cfg.wall.delta > 0.0 &&
        cfg.wall.delta < cfg.wall.sharp - cfg.wall.flat))
    throw ConfigError("config: wall.delta must lie in (0, sharp - flat)");
  if (cfg.wall.kind != "blended" && cfg.wall.kind != "pure-tail")
    throw ConfigError("config: wall.kind must be blended or pure-tail");
  if (cfg.eps.empty()) throw ConfigError("config: eps list is empty");
  const double cap =
      0.2 * (cfg.q_bar * cfg.q_bar * cfg.q_bar / (6.0 * std::sqrt(3.0)));
  for (double e : cfg.eps)
    if (!(e > 0.0 && e <= cap))
      throw ConfigError("config: each eps must lie in (0, " +
                        std::to_string(cap) + "]");
  if (cfg.grid.nk < 16 || cfg.grid.nsigma < 8)
    throw ConfigError("config: grid must be at least 16 x 8");
  if (cfg.gamma_knots < 64)
    throw ConfigError("config: gamma.knots must be at least 64");
  if (cfg.edge_mode != "truncate" && cfg.edge_mode != "bn-cap")
    throw ConfigError("config: edge_mode must be truncate or bn-cap");
  if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
  const double span = cfg.wall.sharp - cfg.wall.flat;
  if (!(cfg.eta_l() > 0.0 && cfg.eta_r() > 0.0 &&
        cfg.eta_l() + cfg.eta_r() < span))
    throw ConfigError("config: truncation margins leave no k-range");
}

}  // namespace hodoshock
