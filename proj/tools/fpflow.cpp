// Command-line front end: analysis reports, jump branches, viscous profiles,
// PDE evolution runs and parameter sweeps, all emitted as deterministic CSV.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "fpflow/fpflow.hpp"

namespace fs = std::filesystem;
using namespace fpflow;

namespace {

PressureLaw law_from(const RunConfig& cfg) {
  return PressureLaw::gamma_law(cfg.pressure_c, cfg.gamma);
}

ModelDescriptor model_from(const RunConfig& cfg) {
  if (cfg.model == "burgers") return ModelDescriptor::burgers(cfg.theta);
  return ModelDescriptor::euler(cfg.theta, law_from(cfg));
}

Vec state_from(const RunConfig& cfg, const ModelDescriptor& model) {
  if (model.kind() == ModelKind::BurgersFP) {
    if (!cfg.rho_star || !cfg.u_star)
      throw ConfigError("analyze/hugoniot on the Burgers system needs state.rho_star and state.u_star");
    Vec P(2);
    P << *cfg.rho_star, *cfg.u_star;
    return model.from_primitive(P);
  }
  if (!cfg.n_star || !cfg.rho_star || !cfg.u_star)
    throw ConfigError("the Euler system needs state.n_star, state.rho_star and state.u_star");
  Vec P(3);
  P << *cfg.n_star, *cfg.rho_star, *cfg.u_star;
  return model.from_primitive(P);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  const fs::path dir = resolve_output_dir(cfg);
  fs::create_directories(dir);
  return (dir / name).string();
}

// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg) {
  const ModelDescriptor model = model_from(cfg);
  const Vec W = state_from(cfg, model);
  const StabilityReport rep = stability_report(model, W);

  CsvWriter csv(out_path(cfg, "analyze.csv"), {"quantity", "value"}, cfg.precision);
  auto put = [&](const std::string& q, double v) { csv.row_raw({q, csv.num(v)}); };
  const int m = model.dim();
  const std::vector<std::string> names =
      m == 2 ? std::vector<std::string>{"lambda_minus", "lambda_plus"}
             : std::vector<std::string>{"lambda_minus", "lambda_0", "lambda_plus"};
  for (int k = 0; k < m; ++k) put(names[k], rep.spectral.eigenvalues[k]);
  put("strictly_hyperbolic", rep.spectral.strictly_hyperbolic ? 1.0 : 0.0);
  for (int k = 0; k < m; ++k) put("gn_" + names[k], rep.spectral.gn_indicators[k]);
  put("xa_defect", rep.symmetrizer.xa_defect);
  put("xd_defect", rep.symmetrizer.xd_defect);
  put("xd_sym_min_eig", rep.symmetrizer.xd_sym_min_eig);
  for (int k = 0; k < m; ++k) put("ks_norm_" + names[k], rep.ks.dr_norms[k]);
  put("ks_pass", rep.ks.pass ? 1.0 : 0.0);
  put("majda_pego_delta", rep.majda_pego_delta);
  if (rep.dsym) {
    put("dsym_theta1", rep.dsym->theta_lower);
    put("dsym_theta2", rep.dsym->theta_upper ? *rep.dsym->theta_upper : kInf);
  }
  if (rep.pego) {
    put("pego_ldr", rep.pego->l_D_r);
    if (rep.pego->re_det_m_max) put("pego_re_detm_max", *rep.pego->re_det_m_max);
  }
  std::cout << "analyze: wrote analyze.csv (" << csv.rows() << " quantities)\n";
  return 0;
}

int cmd_hugoniot(const RunConfig& cfg) {
  const ModelDescriptor model = model_from(cfg);
  const Vec Wstar = state_from(cfg, model);
  if (!cfg.param_min || !cfg.param_max)
    throw ConfigError("hugoniot needs sweep.param_min and sweep.param_max");
  HugoniotBranch br;
  if (model.kind() == ModelKind::BurgersFP)
    br = burgers_branch(Wstar, cfg.theta, cfg.branch_sign, *cfg.param_min, *cfg.param_max,
                        cfg.n_samples);
  else
    br = euler_branch(Wstar, law_from(cfg), cfg.theta, cfg.branch_sign, *cfg.param_min,
                      *cfg.param_max, cfg.n_samples);
  const LiuReport liu = liu_check(br);

  std::vector<std::string> cols = {"param"};
  if (model.kind() == ModelKind::BurgersFP) {
    cols.insert(cols.end(), {"rho", "w"});
  } else {
    cols.insert(cols.end(), {"r", "rho", "w"});
  }
  cols.insert(cols.end(), {"c", "liu_ok"});
  CsvWriter csv(out_path(cfg, "hugoniot.csv"), cols, cfg.precision);
  for (size_t i = 0; i < br.samples.size(); ++i) {
    const auto& s = br.samples[i];
    std::vector<std::string> cells = {csv.num(s.param)};
    for (int k = 0; k < model.dim(); ++k) cells.push_back(csv.num(s.state[k]));
    cells.push_back(csv.num(s.c));
    cells.push_back(s.liu_ok ? "1" : "0");
    csv.row_raw(cells);
  }
  std::cout << "hugoniot: " << br.samples.size() << " samples, speed monotone = "
            << (liu.speed_monotone ? "yes" : "no") << "\n";
  return 0;
}

ReducedParams reduced_from(const RunConfig& cfg) {
  const PressureLaw law = law_from(cfg);
  const bool has_raw = cfg.u_star.has_value() || cfg.rho_star.has_value();
  const bool has_reduced = cfg.tau.has_value() || cfg.kappa.has_value();
  if (has_raw && has_reduced) {
    // both families present: reject, distinguishing outright contradiction
    if (cfg.u_star && cfg.kappa && cfg.tau) {
      const double n_star = cfg.n_star.value_or(cfg.reduced_n_star.value_or(1.0));
      const double expect = std::sqrt(law.value(n_star) * (*cfg.tau) * (*cfg.kappa) / n_star);
      if (std::abs(std::abs(*cfg.u_star) - expect) > 1e-8 * (1.0 + expect)) {
        std::ostringstream os;
        os << "contradiction: |u_star| = " << std::abs(*cfg.u_star)
           << " inconsistent with (tau, kappa); expected " << expect;
        throw ConfigError(os.str());
      }
    }
    throw ConfigError("provide exactly one of a raw base state or reduced parameters (tau, kappa)");
  }
  if (has_reduced) {
    if (!cfg.tau || !cfg.kappa) throw ConfigError("reduced parameters need both tau and kappa");
    const double n_star = cfg.reduced_n_star.value_or(cfg.n_star.value_or(1.0));
    return reduced_params_from_ratios(*cfg.tau, *cfg.kappa, n_star, law, cfg.theta, cfg.u_sign);
  }
  if (!cfg.n_star || !cfg.rho_star || !cfg.u_star)
    throw ConfigError("raw base state needs state.n_star, state.rho_star, state.u_star");
  return reduced_params(*cfg.n_star, *cfg.n_star + *cfg.rho_star, *cfg.u_star, law, cfg.theta);
}

void write_profile_csv(const RunConfig& cfg, const ModelDescriptor& model,
                       const ProfileSolution& prof) {
  const ResidualReport rr = profile_residual_detail(model, prof, prof.c);
  CsvWriter csv(out_path(cfg, "profile.csv"), {"y", "r", "rho", "w", "n", "u", "residual"},
                cfg.precision);
  for (size_t i = 0; i < prof.y.size(); ++i) {
    const Vec& W = prof.states[i];
    const double r = model.hybrid_density(W);
    const double rho = model.particle_density(W);
    const double w = model.momentum(W);
    csv.row({prof.y[i], r, rho, w, r - rho, w / r, rr.pointwise[i]});
  }
}

int cmd_profile(const RunConfig& cfg) {
  if (cfg.model == "burgers") {
    if (!cfg.rho_star || !cfg.u_star || !cfg.rho_cross)
      throw ConfigError("Burgers profile needs state.rho_star, state.u_star, state.rho_cross");
    if (!(cfg.theta > 0.0)) throw ConfigError("Burgers profile needs theta > 0");
    const ModelDescriptor model = ModelDescriptor::burgers(cfg.theta);
    Vec P(2);
    P << *cfg.rho_star, *cfg.u_star;
    const Vec Wstar = model.from_primitive(P);
    const JumpState js = burgers_jump(Wstar, cfg.theta, cfg.branch_sign, *cfg.rho_cross);
    const ProfileSolution prof = profile_burgers(Wstar, js.state, js.c, cfg.theta);
    write_profile_csv(cfg, model, prof);
    std::cout << "profile: " << prof.y.size() << " points, c = " << format_sig(prof.c, 9)
              << ", residual_sup = " << format_sig(prof.residual_sup, 6)
              << ", monotone = " << (prof.monotone ? "yes" : "no") << "\n";
    return 0;
  }
  const ReducedParams rp = reduced_from(cfg);
  const ModelDescriptor model = ModelDescriptor::euler(cfg.theta, law_from(cfg));
  const ProfileSolution prof = cfg.theta > 0.0 ? profile_theta(rp) : profile_theta0(rp);
  write_profile_csv(cfg, model, prof);
  std::cout << "profile: " << prof.y.size() << " points, c = 0 (comoving)"
            << ", residual_sup = " << format_sig(prof.residual_sup, 6)
            << ", monotone = " << (prof.monotone ? "yes" : "no") << "\n";
  return 0;
}

int cmd_evolve(const RunConfig& cfg) {
  const ModelDescriptor model = model_from(cfg);
  const int m = model.dim();
  Grid1D grid;
  grid.x_left = cfg.ev_x_left;
  grid.x_right = cfg.ev_x_right;
  grid.n_cells = cfg.ev_n_cells;
  grid.boundary = cfg.ev_boundary == "periodic" ? BoundaryKind::Periodic : BoundaryKind::Dirichlet;
  grid.states = Mat(m, grid.n_cells);

  EvolveConfig ec;
  ec.eps = cfg.ev_eps;
  ec.cfl_hyp = cfg.ev_cfl_hyp;
  ec.cfl_visc = cfg.ev_cfl_visc;
  ec.t_end = cfg.ev_t_end;
  ec.snapshot_every = cfg.ev_snapshot_every;

  if (cfg.ev_init == "riemann") {
    auto prim = [&](bool left) -> Vec {
      Vec P(m);
      if (m == 2) {
        const auto rho = left ? cfg.left_rho : cfg.right_rho;
        const auto u = left ? cfg.left_u : cfg.right_u;
        if (!rho || !u) throw ConfigError("riemann init needs left/right rho and u");
        P << *rho, *u;
      } else {
        const auto n = left ? cfg.left_n : cfg.right_n;
        const auto rho = left ? cfg.left_rho : cfg.right_rho;
        const auto u = left ? cfg.left_u : cfg.right_u;
        if (!n || !rho || !u) throw ConfigError("riemann init needs left/right n, rho and u");
        P << *n, *rho, *u;
      }
      return P;
    };
    const Vec WL = model.from_primitive(prim(true));
    const Vec WR = model.from_primitive(prim(false));
    for (int i = 0; i < grid.n_cells; ++i) grid.states.col(i) = grid.center(i) < 0.0 ? WL : WR;
    grid.ghost_left = WL;
    grid.ghost_right = WR;
  } else if (cfg.ev_init == "profile") {
    if (model.kind() != ModelKind::EulerFP)
      throw ConfigError("evolve.init = profile is supported for the Euler system");
    const ReducedParams rp = reduced_from(cfg);
    const ProfileSolution prof = cfg.theta > 0.0 ? profile_theta(rp) : profile_theta0(rp);
    grid.states = profile_on_grid(prof, grid, ec.eps);
    grid.ghost_left = grid.states.col(0);
    grid.ghost_right = grid.states.col(grid.n_cells - 1);
  } else {
    throw ConfigError("evolve.init must be 'riemann' or 'profile'");
  }

  const Trajectory traj = evolve_viscous(model, grid, ec, cfg.measure_component);

  std::vector<std::string> scol = m == 2 ? std::vector<std::string>{"rho", "w"}
                                         : std::vector<std::string>{"r", "rho", "w"};
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", k);
    std::vector<std::string> cols = {"x"};
    cols.insert(cols.end(), scol.begin(), scol.end());
    CsvWriter csv(out_path(cfg, name), cols, cfg.precision);
    for (int i = 0; i < grid.n_cells; ++i) {
      std::vector<double> row = {traj.grid.center(i)};
      for (int c = 0; c < m; ++c) row.push_back(traj.snapshots[k](c, i));
      csv.row(row);
    }
  }
  {
    std::vector<std::string> cols = {"t"};
    for (const auto& s : scol) cols.push_back("total_" + s);
    cols.push_back("entropy");
    cols.push_back("front");
    CsvWriter csv(out_path(cfg, "diagnostics.csv"), cols, cfg.precision);
    for (const auto& d : traj.diagnostics) {
      std::vector<double> row = {d.t};
      for (int c = 0; c < m; ++c) row.push_back(d.totals[c]);
      row.push_back(d.entropy);
      row.push_back(d.front_found ? d.front_x : std::numeric_limits<double>::quiet_NaN());
      csv.row(row);
    }
  }
  const double level = 0.5 * (grid.states(cfg.measure_component, 0) +
                              grid.states(cfg.measure_component, grid.n_cells - 1));
  try {
    const SpeedEstimate est = measure_wave_speed(traj, cfg.measure_component, level);
    std::cout << "evolve: " << traj.snapshots.size() << " snapshots, measured_speed = "
              << format_sig(est.speed, 9) << " +- " << format_sig(est.uncertainty, 4) << "\n";
  } catch (const NumericError&) {
    std::cout << "evolve: " << traj.snapshots.size() << " snapshots, no front detected\n";
  }
  return 0;
}

int cmd_sweep_tau(const RunConfig& cfg) {
  const PressureLaw law = law_from(cfg);
  const double n_base = cfg.reduced_n_star.value_or(cfg.n_star.value_or(1.0));
  const RescaledPressure resc = RescaledPressure::make(law, n_base);
  if (!(cfg.kappa_min > 0.0 && cfg.kappa_max > cfg.kappa_min) || cfg.n_kappa < 2)
    throw ConfigError("sweep-tau needs 0 < kappa_min < kappa_max and n_kappa >= 2");
  std::set<double> kappas;
  for (int i = 0; i < cfg.n_kappa; ++i) {
    const double t = static_cast<double>(i) / (cfg.n_kappa - 1.0);
    kappas.insert(cfg.kappa_min * std::pow(cfg.kappa_max / cfg.kappa_min, t));
  }
  const double kstar = resc.kappa_star();
  if (kstar > cfg.kappa_min && kstar < cfg.kappa_max) kappas.insert(kstar);

  CsvWriter csv(out_path(cfg, "sweep_tau.csv"), {"kappa", "n_hash", "tau_hash", "n_cross"},
                cfg.precision);
  for (double kappa : kappas) {
    const TauSharp ts = tau_sharp(kappa, resc);
    const NCrossResult nc = n_cross(kappa, resc);
    csv.row({kappa, ts.n_hash, ts.tau_hash, nc.n_cross});
  }
  std::cout << "sweep-tau: " << csv.rows() << " rows\n";
  return 0;
}

int cmd_sweep_g(const RunConfig& cfg) {
  const PressureLaw law = law_from(cfg);
  const double n_base = cfg.reduced_n_star.value_or(cfg.n_star.value_or(1.0));
  const RescaledPressure resc = RescaledPressure::make(law, n_base);
  std::vector<double> kappas;
  std::stringstream ss(cfg.kappa_list.empty() ? std::string("0.5,1,2,3,5") : cfg.kappa_list);
  std::string tok;
  while (std::getline(ss, tok, ','))
    kappas.push_back(detail::parse_number("sweep.kappa_list", detail::trim(tok)));
  if (kappas.empty()) throw ConfigError("sweep-g: empty kappa list");
  if (cfg.sweep_n_points < 2) throw ConfigError("sweep-g: n_points must be >= 2");

  CsvWriter csv(out_path(cfg, "sweep_g.csv"), {"kappa", "n", "g"}, cfg.precision);
  for (double kappa : kappas) {
    if (!(kappa > 0.0)) throw ConfigError("sweep-g: kappa values must be positive");
    const double n_hi = resc.n_bar(kappa) * (1.0 - 1e-9);
    const double n_lo = cfg.sweep_n_min;
    if (!(n_lo > 0.0 && n_lo < n_hi)) throw ConfigError("sweep-g: bad n range");
    for (int i = 0; i < cfg.sweep_n_points; ++i) {
      const double n = n_lo + (n_hi - n_lo) * i / (cfg.sweep_n_points - 1.0);
      csv.row({kappa, n, g_kappa(n, kappa, resc).first});
    }
  }
  std::cout << "sweep-g: " << csv.rows() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hydrodynamic fluid-particle systems: stability reports, jump branches, "
               "viscous shock profiles, and finite-volume verification runs"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> o_model, o_outdir, o_init, o_boundary, o_kappa_list;
  std::optional<double> o_theta, o_gamma, o_c, o_nstar, o_rhostar, o_ustar, o_rhocross,
      o_tau, o_kappa, o_pmin, o_pmax, o_kmin, o_kmax, o_eps, o_tend, o_xl, o_xr;
  std::optional<int> o_sign, o_usign, o_samples, o_nkappa, o_ncells, o_prec, o_snap;

  app.add_option("--config", config_path, "key-value config file");
  app.add_option("--model", o_model, "euler | burgers");
  app.add_option("--theta", o_theta, "temperature");
  app.add_option("--gamma", o_gamma, "pressure-law exponent");
  app.add_option("--c", o_c, "pressure-law coefficient");
  app.add_option("--n-star", o_nstar, "base carrier density");
  app.add_option("--rho-star", o_rhostar, "base particle density");
  app.add_option("--u-star", o_ustar, "base velocity");
  app.add_option("--rho-cross", o_rhocross, "far particle density (Burgers profile)");
  app.add_option("--tau", o_tau, "density ratio n*/r*");
  app.add_option("--kappa", o_kappa, "kinetic energy / pressure ratio");
  app.add_option("--u-sign", o_usign, "sign of u* when built from (tau, kappa)");
  app.add_option("--sign", o_sign, "branch family sign (+1 or -1)");
  app.add_option("--param-min", o_pmin, "branch parameter lower end");
  app.add_option("--param-max", o_pmax, "branch parameter upper end");
  app.add_option("--samples", o_samples, "branch sample count");
  app.add_option("--kappa-min", o_kmin, "sweep lower kappa");
  app.add_option("--kappa-max", o_kmax, "sweep upper kappa");
  app.add_option("--n-kappa", o_nkappa, "sweep kappa count");
  app.add_option("--kappa-list", o_kappa_list, "comma-separated kappas (sweep-g)");
  app.add_option("--epsilon", o_eps, "viscosity scale for evolution");
  app.add_option("--t-end", o_tend, "evolution end time");
  app.add_option("--n-cells", o_ncells, "evolution cell count");
  app.add_option("--x-left", o_xl, "domain left end");
  app.add_option("--x-right", o_xr, "domain right end");
  app.add_option("--init", o_init, "evolution initial data: riemann | profile");
  app.add_option("--boundary", o_boundary, "dirichlet | periodic");
  app.add_option("--snapshot-every", o_snap, "record every k-th step");
  app.add_option("--out-dir", o_outdir, "output directory");
  app.add_option("--precision", o_prec, "CSV significant digits");

  auto* sub_analyze = app.add_subcommand("analyze", "spectral and stability report at a state");
  auto* sub_hugoniot = app.add_subcommand("hugoniot", "sampled jump branch with admissibility flags");
  auto* sub_profile = app.add_subcommand("profile", "viscous shock profile");
  auto* sub_evolve = app.add_subcommand("evolve", "finite-volume evolution run");
  auto* sub_sweep_tau = app.add_subcommand("sweep-tau", "admissibility threshold table over kappa");
  auto* sub_sweep_g = app.add_subcommand("sweep-g", "equilibrium function tables over kappa");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) parse_config_file(config_path, cfg);
    if (o_model) cfg.model = *o_model;
    if (o_theta) cfg.theta = *o_theta;
    if (o_gamma) cfg.gamma = *o_gamma;
    if (o_c) cfg.pressure_c = *o_c;
    if (o_nstar) cfg.n_star = *o_nstar;
    if (o_rhostar) cfg.rho_star = *o_rhostar;
    if (o_ustar) cfg.u_star = *o_ustar;
    if (o_rhocross) cfg.rho_cross = *o_rhocross;
    if (o_tau) cfg.tau = *o_tau;
    if (o_kappa) cfg.kappa = *o_kappa;
    if (o_usign) cfg.u_sign = *o_usign;
    if (o_sign) cfg.branch_sign = *o_sign;
    if (o_pmin) cfg.param_min = *o_pmin;
    if (o_pmax) cfg.param_max = *o_pmax;
    if (o_samples) cfg.n_samples = *o_samples;
    if (o_kmin) cfg.kappa_min = *o_kmin;
    if (o_kmax) cfg.kappa_max = *o_kmax;
    if (o_nkappa) cfg.n_kappa = *o_nkappa;
    if (o_kappa_list) cfg.kappa_list = *o_kappa_list;
    if (o_eps) cfg.ev_eps = *o_eps;
    if (o_tend) cfg.ev_t_end = *o_tend;
    if (o_ncells) cfg.ev_n_cells = *o_ncells;
    if (o_xl) cfg.ev_x_left = *o_xl;
    if (o_xr) cfg.ev_x_right = *o_xr;
    if (o_init) cfg.ev_init = *o_init;
    if (o_boundary) cfg.ev_boundary = *o_boundary;
    if (o_snap) cfg.ev_snapshot_every = *o_snap;
    if (o_outdir) cfg.out_dir = *o_outdir;
    if (o_prec) cfg.precision = *o_prec;
    validate_config(cfg);

    if (sub_analyze->parsed()) return cmd_analyze(cfg);
    if (sub_hugoniot->parsed()) return cmd_hugoniot(cfg);
    if (sub_profile->parsed()) return cmd_profile(cfg);
    if (sub_evolve->parsed()) return cmd_evolve(cfg);
    if (sub_sweep_tau->parsed()) return cmd_sweep_tau(cfg);
    if (sub_sweep_g->parsed()) return cmd_sweep_g(cfg);
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 1;
  } catch (const AdmissibilityError& e) {
    std::cerr << "error: admissibility: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return 3;
  }
}
