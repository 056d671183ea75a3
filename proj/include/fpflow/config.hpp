#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "fpflow/common.hpp"

namespace fpflow {

/// Run configuration shared by all CLI subcommands. Sections of the key-value
/// config file: [model], [state], [reduced], [sweep], [evolve], [output].
/// Unknown sections or keys are errors.
struct RunConfig {
  // [model]
  std::string model = "euler";  // euler | burgers
  double theta = 0.0;
  double gamma = 2.0;
  double pressure_c = 1.0;

  // [state]
  std::optional<double> n_star, rho_star, u_star;
  std::optional<double> rho_cross, n_cross_param;  // far-state parameter for profile/jump work

  // [reduced]
  std::optional<double> tau, kappa;
  std::optional<double> reduced_n_star;
  int u_sign = -1;

  // [sweep]
  int branch_sign = +1;
  std::optional<double> param_min, param_max;
  int n_samples = 41;
  double kappa_min = 0.05, kappa_max = 12.0;
  int n_kappa = 60;
  std::string kappa_list;  // comma-separated, for the g tables
  double sweep_n_min = 1e-3;
  int sweep_n_points = 200;

  // [evolve]
  double ev_eps = 0.01;
  double ev_cfl_hyp = 0.45, ev_cfl_visc = 0.4;
  double ev_t_end = 1.0;
  int ev_snapshot_every = 50;
  double ev_x_left = -2.0, ev_x_right = 6.0;
  int ev_n_cells = 512;
  std::string ev_boundary = "dirichlet";  // dirichlet | periodic
  std::string ev_init = "riemann";        // riemann | profile
  std::optional<double> left_rho, left_u, left_n, right_rho, right_u, right_n;
  int measure_component = 0;

  // [output]
  std::string out_dir;
  int precision = 15;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_number(key, v);
  if (x != std::floor(x)) throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<int>(x);
}

}  // namespace detail

/// Parses the sectioned key-value file into cfg. Later assignments win, so
/// command-line overrides should be applied after this call.
inline void parse_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header at line " +
                                                std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "state" && section != "reduced" &&
          section != "sweep" && section != "evolve" && section != "output")
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    auto num = [&] { return detail::parse_number(qual, val); };
    auto integer = [&] { return detail::parse_int(qual, val); };

    if (qual == "model.kind") cfg.model = val;
    else if (qual == "model.theta") cfg.theta = num();
    else if (qual == "model.gamma") cfg.gamma = num();
    else if (qual == "model.c") cfg.pressure_c = num();
    else if (qual == "state.n_star") cfg.n_star = num();
    else if (qual == "state.rho_star") cfg.rho_star = num();
    else if (qual == "state.u_star") cfg.u_star = num();
    else if (qual == "state.rho_cross") cfg.rho_cross = num();
    else if (qual == "state.n_cross") cfg.n_cross_param = num();
    else if (qual == "reduced.tau") cfg.tau = num();
    else if (qual == "reduced.kappa") cfg.kappa = num();
    else if (qual == "reduced.n_star") cfg.reduced_n_star = num();
    else if (qual == "reduced.u_sign") cfg.u_sign = integer();
    else if (qual == "sweep.branch_sign") cfg.branch_sign = integer();
    else if (qual == "sweep.param_min") cfg.param_min = num();
    else if (qual == "sweep.param_max") cfg.param_max = num();
    else if (qual == "sweep.n_samples") cfg.n_samples = integer();
    else if (qual == "sweep.kappa_min") cfg.kappa_min = num();
    else if (qual == "sweep.kappa_max") cfg.kappa_max = num();
    else if (qual == "sweep.n_kappa") cfg.n_kappa = integer();
    else if (qual == "sweep.kappa_list") cfg.kappa_list = val;
    else if (qual == "sweep.n_min") cfg.sweep_n_min = num();
    else if (qual == "sweep.n_points") cfg.sweep_n_points = integer();
    else if (qual == "evolve.epsilon") cfg.ev_eps = num();
    else if (qual == "evolve.cfl_hyp") cfg.ev_cfl_hyp = num();
    else if (qual == "evolve.cfl_visc") cfg.ev_cfl_visc = num();
    else if (qual == "evolve.t_end") cfg.ev_t_end = num();
    else if (qual == "evolve.snapshot_every") cfg.ev_snapshot_every = integer();
    else if (qual == "evolve.x_left") cfg.ev_x_left = num();
    else if (qual == "evolve.x_right") cfg.ev_x_right = num();
    else if (qual == "evolve.n_cells") cfg.ev_n_cells = integer();
    else if (qual == "evolve.boundary") cfg.ev_boundary = val;
    else if (qual == "evolve.init") cfg.ev_init = val;
    else if (qual == "evolve.left_rho") cfg.left_rho = num();
    else if (qual == "evolve.left_u") cfg.left_u = num();
    else if (qual == "evolve.left_n") cfg.left_n = num();
    else if (qual == "evolve.right_rho") cfg.right_rho = num();
    else if (qual == "evolve.right_u") cfg.right_u = num();
    else if (qual == "evolve.right_n") cfg.right_n = num();
    else if (qual == "evolve.measure_component") cfg.measure_component = integer();
    else if (qual == "output.dir") cfg.out_dir = val;
    else if (qual == "output.precision") cfg.precision = integer();
    else throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
  }
}

/// Checks shared by every subcommand. Profile-specific consistency (raw state
/// versus reduced parameters) is enforced by the profile command itself.
inline void validate_config(const RunConfig& cfg) {
  if (cfg.model != "euler" && cfg.model != "burgers")
    throw ConfigError("model.kind must be 'euler' or 'burgers'");
  if (!(cfg.theta >= 0.0)) throw ConfigError("theta must be nonnegative");
  if (!(cfg.gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(cfg.pressure_c > 0.0)) throw ConfigError("pressure coefficient c must be positive");
  if (cfg.tau && !(*cfg.tau > 0.0 && *cfg.tau < 1.0))
    throw ConfigError("tau must lie in (0,1)");
  if (cfg.kappa && !(*cfg.kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (cfg.precision < 6 || cfg.precision > 17)
    throw ConfigError("output precision must lie in [6,17]");
  if (cfg.u_sign != 1 && cfg.u_sign != -1) throw ConfigError("u_sign must be +1 or -1");
  if (cfg.branch_sign != 1 && cfg.branch_sign != -1)
    throw ConfigError("branch_sign must be +1 or -1");
  if (cfg.ev_boundary != "dirichlet" && cfg.ev_boundary != "periodic")
    throw ConfigError("evolve.boundary must be 'dirichlet' or 'periodic'");
}

/// Output directory precedence: explicit value > FPFLOW_OUT env var > cwd.
inline std::string resolve_output_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("FPFLOW_OUT")) return env;
  return ".";
}

}  // namespace fpflow
