#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "fpflow/models.hpp"
#include "fpflow/profiles.hpp"

namespace fpflow {

enum class BoundaryKind { Dirichlet, Periodic };

struct Grid1D {
  double x_left = 0.0, x_right = 1.0;
  int n_cells = 0;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  Mat states;                   // dim x n_cells, cell averages
  Vec ghost_left, ghost_right;  // far-field values for Dirichlet runs

  double dx() const { return (x_right - x_left) / n_cells; }
  double center(int i) const { return x_left + (i + 0.5) * dx(); }

  void validate(int dim) const {
    if (n_cells < 16) throw DomainError("grid: need at least 16 cells");
    if (!(x_right > x_left)) throw DomainError("grid: empty domain");
    if (states.rows() != dim || states.cols() != n_cells)
      throw DomainError("grid: state block has the wrong shape");
    if (boundary == BoundaryKind::Dirichlet &&
        (ghost_left.size() != dim || ghost_right.size() != dim))
      throw DomainError("grid: Dirichlet run needs ghost values");
  }
};

struct EvolveConfig {
  double eps = 0.01;        // viscosity scale
  double cfl_hyp = 0.45;    // in (0, 1]
  double cfl_visc = 0.4;    // in (0, 0.5]
  double t_end = 1.0;
  int snapshot_every = 10;  // record every k-th accepted step

  void validate() const {
    if (!(eps > 0.0)) throw DomainError("evolve: eps must be positive");
    if (!(cfl_hyp > 0.0 && cfl_hyp <= 1.0)) throw DomainError("evolve: cfl_hyp out of range");
    if (!(cfl_visc > 0.0 && cfl_visc <= 0.5)) throw DomainError("evolve: cfl_visc out of range");
    if (!(t_end > 0.0)) throw DomainError("evolve: t_end must be positive");
    if (snapshot_every < 1) throw DomainError("evolve: snapshot_every must be >= 1");
  }
};

struct Diagnostics {
  double t = 0.0;
  Vec totals;            // sum of each conserved component times dx
  double entropy = 0.0;  // integral of zeta (NaN if a log term is out of range)
  double front_x = 0.0;
  bool front_found = false;
};

struct Trajectory {
  Grid1D grid;  // geometry of the run; states member holds the final state
  std::vector<double> times;
  std::vector<Mat> snapshots;
  std::vector<Diagnostics> diagnostics;
};

namespace detail {

inline double max_sym_eig(const Mat& D) {
  const Mat S = 0.5 * (D + D.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  return es.eigenvalues().maxCoeff();
}

/// First level crossing of a sampled front, linearly interpolated between
/// cell centers.
inline std::optional<double> level_crossing(const Grid1D& g, const Mat& U, int comp,
                                            double level) {
  for (int i = 0; i + 1 < g.n_cells; ++i) {
    const double a = U(comp, i) - level, b = U(comp, i + 1) - level;
    if (a == 0.0) return g.center(i);
    if (a * b < 0.0) return g.center(i) + (0.0 - a) / (b - a) * g.dx();
  }
  return std::nullopt;
}

}  // namespace detail

/// Conservative finite-volume evolution: local Lax-Friedrichs (Rusanov)
/// numerical flux, second-order centered diffusion with face-averaged D,
/// two-stage strong-stability-preserving Runge-Kutta in time.
inline Trajectory evolve_viscous(const ModelDescriptor& model, const Grid1D& grid_in,
                                 const EvolveConfig& cfg, int front_component = 0,
                                 std::optional<double> front_level = std::nullopt) {
  cfg.validate();
  grid_in.validate(model.dim());
  const int m = model.dim();
  const int N = grid_in.n_cells;
  const double dx = grid_in.dx();

  Trajectory traj;
  traj.grid = grid_in;
  Mat U = grid_in.states;

  auto fetch = [&](const Mat& W, int i) -> Vec {
    if (i >= 0 && i < N) return W.col(i);
    if (grid_in.boundary == BoundaryKind::Periodic) return W.col((i % N + N) % N);
    return i < 0 ? grid_in.ghost_left : grid_in.ghost_right;
  };

  auto rhs = [&](const Mat& W, double t) -> Mat {
    Mat L(m, N);
    Vec WL = fetch(W, -1);
    Vec FL = model.flux(WL);
    double aL = model.max_abs_eigenvalue(WL);
    Mat DL = model.diffusion(WL);
    std::vector<Vec> face_flux(N + 1), face_diff(N + 1);
    for (int f = 0; f <= N; ++f) {
      const Vec WR = fetch(W, f);
      if (!model.state_valid(WR)) {
        std::ostringstream os;
        os << "evolve: invalid state at cell " << std::min(f, N - 1) << ", t = " << t;
        throw NumericError(os.str());
      }
      const Vec FR = model.flux(WR);
      const double aR = model.max_abs_eigenvalue(WR);
      const Mat DR = model.diffusion(WR);
      const double a = std::max(aL, aR);
      face_flux[f] = 0.5 * (FL + FR) - 0.5 * a * (WR - WL);
      face_diff[f] = (0.5 * (DL + DR)) * ((WR - WL) / dx);
      WL = WR;
      FL = FR;
      aL = aR;
      DL = DR;
    }
    for (int i = 0; i < N; ++i)
      L.col(i) = -(face_flux[i + 1] - face_flux[i]) / dx +
                 cfg.eps * (face_diff[i + 1] - face_diff[i]) / dx;
    return L;
  };

  auto time_step = [&](const Mat& W) {
    double amax = 0.0, dmax = 0.0;
    for (int i = 0; i < N; ++i) {
      amax = std::max(amax, model.max_abs_eigenvalue(W.col(i)));
      dmax = std::max(dmax, detail::max_sym_eig(model.diffusion(W.col(i))));
    }
    dmax = std::max(dmax, 1e-14);  // floor when D degenerates
    const double dt_h = amax > 0 ? cfg.cfl_hyp * dx / amax : kInf;
    const double dt_v = cfg.cfl_visc * dx * dx / (cfg.eps * dmax);
    return std::min(dt_h, dt_v);
  };

  const double level = front_level ? *front_level
                                   : 0.5 * (U(front_component, 0) + U(front_component, N - 1));

  auto record = [&](double t, const Mat& W) {
    traj.times.push_back(t);
    traj.snapshots.push_back(W);
    Diagnostics d;
    d.t = t;
    d.totals = Vec::Zero(m);
    for (int i = 0; i < N; ++i) d.totals += W.col(i) * dx;
    try {
      d.entropy = 0.0;
      for (int i = 0; i < N; ++i) d.entropy += model.entropy_pack(W.col(i)).value * dx;
    } catch (const DomainError&) {
      d.entropy = std::numeric_limits<double>::quiet_NaN();
    }
    if (auto x = detail::level_crossing(traj.grid, W, front_component, level)) {
      d.front_x = *x;
      d.front_found = true;
    }
    traj.diagnostics.push_back(d);
  };

  record(0.0, U);
  double t = 0.0;
  long step = 0;
  while (t < cfg.t_end) {
    const double dt_raw = time_step(U);
    if (!(dt_raw > 1e-14 * std::max(1.0, cfg.t_end)))
      throw NumericError("evolve: time step underflow");
    const double dt = std::min(dt_raw, cfg.t_end - t);
    if (!(dt > 0.0)) break;
    const Mat U1 = U + dt * rhs(U, t);
    U = 0.5 * U + 0.5 * (U1 + dt * rhs(U1, t + dt));
    t += dt;
    ++step;
    if (step % cfg.snapshot_every == 0 || t >= cfg.t_end) record(t, U);
  }
  traj.grid.states = U;
  return traj;
}

struct SpeedEstimate {
  double speed = 0.0;
  double uncertainty = 0.0;  // rms residual of the linear fit
};

/// Least-squares slope of the level-crossing abscissa against time.
inline SpeedEstimate measure_wave_speed(const Trajectory& traj, int component, double level) {
  std::vector<double> ts, xs;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    if (auto x = detail::level_crossing(traj.grid, traj.snapshots[k], component, level)) {
      ts.push_back(traj.times[k]);
      xs.push_back(*x);
    }
  }
  if (ts.size() < 3) throw NumericError("measure_wave_speed: fewer than 3 crossings found");
  const int n = static_cast<int>(ts.size());
  double st = 0, sx = 0, stt = 0, stx = 0;
  for (int i = 0; i < n; ++i) {
    st += ts[i];
    sx += xs[i];
    stt += ts[i] * ts[i];
    stx += ts[i] * xs[i];
  }
  const double den = n * stt - st * st;
  if (den == 0.0) throw NumericError("measure_wave_speed: degenerate time samples");
  SpeedEstimate est;
  est.speed = (n * stx - st * sx) / den;
  const double b = (sx - est.speed * st) / n;
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) r2 += detail::sqr(xs[i] - est.speed * ts[i] - b);
  est.uncertainty = std::sqrt(r2 / n);
  return est;
}

/// Piecewise-linear evaluation of a profile at abscissa y, clamped to the
/// asymptotic states outside the sampled range.
inline Vec profile_eval(const ProfileSolution& prof, double y) {
  if (y <= prof.y.front()) return prof.states.front();
  if (y >= prof.y.back()) return prof.states.back();
  const auto it = std::upper_bound(prof.y.begin(), prof.y.end(), y);
  const int i = std::max(0, static_cast<int>(it - prof.y.begin()) - 1);
  const double t = (y - prof.y[i]) / (prof.y[i + 1] - prof.y[i]);
  return (1.0 - t) * prof.states[i] + t * prof.states[i + 1];
}

/// Profile sampled onto grid cell centers in x, where the traveling-wave
/// coordinate is y = (x - x0)/eps.
inline Mat profile_on_grid(const ProfileSolution& prof, const Grid1D& g, double eps,
                           double x0 = 0.0) {
  Mat U(prof.W_minus.size(), g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) U.col(i) = profile_eval(prof, (g.center(i) - x0) / eps);
  return U;
}

/// L2 distance between a grid solution and the profile translated by s,
/// minimized over s near s_center: coarse scan within +-5 cells followed by a
/// golden-section refine.
inline double shift_minimized_distance(const Mat& U, const ProfileSolution& prof,
                                       const Grid1D& g, double eps, double s_center = 0.0,
                                       double* best_shift = nullptr) {
  const double dx = g.dx();
  auto dist = [&](double s) {
    double acc = 0.0;
    for (int i = 0; i < g.n_cells; ++i)
      acc += (U.col(i) - profile_eval(prof, (g.center(i) - s) / eps)).squaredNorm() * dx;
    return std::sqrt(acc);
  };
  double s_best = s_center, d_best = kInf;
  for (int k = -20; k <= 20; ++k) {
    const double s = s_center + 5.0 * dx * k / 20.0;
    const double d = dist(s);
    if (d < d_best) {
      d_best = d;
      s_best = s;
    }
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = s_best - 0.5 * dx, b = s_best + 0.5 * dx;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = dist(c1), f2 = dist(c2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = dist(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = dist(c2);
    }
  }
  const double s_opt = 0.5 * (a + b);
  const double d_opt = dist(s_opt);
  if (best_shift) *best_shift = d_opt < d_best ? s_opt : s_best;
  return std::min(d_opt, d_best);
}

struct Perturbation {
  double amplitude = 0.0;
  double width = 1.0;
  int component = 0;
  double center = 0.0;
};

struct StabilityDiagnostic {
  std::vector<double> t;
  std::vector<double> d;  // shift-minimized L2 distance to the profile
  double d0 = 0.0, d_end = 0.0;
  bool decayed = false;   // d(t_end) < d(0)/2
};

/// Seeds the grid with profile + compact bump, evolves, and tracks the
/// shift-minimized distance to the traveling profile (the shift search is
/// centered on the translated wave position c t).
inline StabilityDiagnostic perturb_and_evolve(const ModelDescriptor& model,
                                              const ProfileSolution& prof,
                                              const Perturbation& pert, Grid1D grid,
                                              const EvolveConfig& cfg) {
  const double jump = (prof.W_plus - prof.W_minus).norm();
  if (!(std::abs(pert.amplitude) <= 0.1 * jump + 1e-300))
    throw DomainError("perturb_and_evolve: perturbation exceeds 10% of the jump amplitude");
  grid.states = profile_on_grid(prof, grid, cfg.eps);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    grid.states(pert.component, i) +=
        pert.amplitude * std::exp(-detail::sqr((x - pert.center) / pert.width));
  }
  grid.ghost_left = grid.states.col(0);
  grid.ghost_right = grid.states.col(grid.n_cells - 1);

  const Trajectory traj = evolve_viscous(model, grid, cfg);
  StabilityDiagnostic diag;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    const double dk =
        shift_minimized_distance(traj.snapshots[k], prof, grid, cfg.eps, prof.c * traj.times[k]);
    diag.t.push_back(traj.times[k]);
    diag.d.push_back(dk);
  }
  diag.d0 = diag.d.front();
  diag.d_end = diag.d.back();
  diag.decayed = diag.d_end < 0.5 * diag.d0;
  return diag;
}

}  // namespace fpflow
