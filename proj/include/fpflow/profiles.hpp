#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "fpflow/hugoniot.hpp"
#include "fpflow/models.hpp"
#include "fpflow/ode.hpp"
#include "fpflow/rootfind.hpp"

namespace fpflow {

/// Pressure law rescaled around a base carrier density: pbar(n) = p(n* n)/p*,
/// so that pbar(1) = 1 and pbar'(1) equals the slope threshold kappa*.
struct RescaledPressure {
  PressureLaw law = PressureLaw::gamma_law(1.0, 2.0);
  double n_star = 1.0;
  double p_star = 1.0;

  static RescaledPressure make(const PressureLaw& law, double n_star) {
    if (!(n_star > 0.0)) throw DomainError("rescaled pressure: n* must be positive");
    RescaledPressure r{law, n_star, law.value(n_star)};
    return r;
  }

  double pbar(double n) const { return law.value(n_star * n) / p_star; }
  double pbar_prime(double n) const { return n_star * law.deriv(n_star * n) / p_star; }
  double kappa_star() const { return pbar_prime(1.0); }
  /// Upper end of the admissible rescaled density range, pbar^{-1}(1+kappa).
  double n_bar(double kappa) const { return law.inverse((1.0 + kappa) * p_star) / n_star; }
  /// r_kappa(n) = kappa / (1 + kappa - pbar(n)) on (0, n_bar).
  double r_kappa(double kappa, double n) const { return kappa / (1.0 + kappa - pbar(n)); }
  double r_kappa_prime(double kappa, double n) const {
    const double den = 1.0 + kappa - pbar(n);
    return kappa * pbar_prime(n) / (den * den);
  }
};

/// Dimensionless description of a comoving base state for the Euler system:
/// tau = n*/r*, kappa = r* u*^2 / p*, kappa* = n* p'(n*)/p*, eps = r* theta / p*.
struct ReducedParams {
  double tau = 0.0;
  double kappa = 0.0;
  double kappa_star = 0.0;
  double eps = 0.0;
  int u_sign = -1;
  double n_star = 1.0, r_star = 2.0, u_star = 0.0, p_star = 1.0;
  double theta = 0.0;
  RescaledPressure resc;
};

inline ReducedParams reduced_params(double n_star, double r_star, double u_star,
                                    const PressureLaw& law, double theta) {
  if (!(n_star > 0.0 && n_star < r_star))
    throw DomainError("reduced_params: require 0 < n* < r*");
  if (!(u_star != 0.0)) throw DomainError("reduced_params: u* must be nonzero");
  if (!(theta >= 0.0)) throw DomainError("reduced_params: theta must be nonnegative");
  ReducedParams rp;
  rp.n_star = n_star;
  rp.r_star = r_star;
  rp.u_star = u_star;
  rp.u_sign = u_star > 0 ? +1 : -1;
  rp.theta = theta;
  rp.p_star = law.value(n_star);
  rp.tau = n_star / r_star;
  rp.kappa = r_star * u_star * u_star / rp.p_star;
  rp.kappa_star = n_star * law.deriv(n_star) / rp.p_star;
  rp.eps = r_star * theta / rp.p_star;
  rp.resc = RescaledPressure::make(law, n_star);
  return rp;
}

inline ReducedParams reduced_params_from_ratios(double tau, double kappa, double n_star,
                                                const PressureLaw& law, double theta,
                                                int u_sign = -1) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("reduced_params: tau must lie in (0,1)");
  if (!(kappa > 0.0)) throw DomainError("reduced_params: kappa must be positive");
  const double r_star = n_star / tau;
  const double p_star = law.value(n_star);
  const double u_star = (u_sign >= 0 ? 1.0 : -1.0) * std::sqrt(p_star * tau * kappa / n_star);
  return reduced_params(n_star, r_star, u_star, law, theta);
}

/// g_kappa(n) = (1 + kappa - pbar(n))/kappa - 1/n and its derivative.
inline std::pair<double, double> g_kappa(double n, double kappa, const RescaledPressure& resc) {
  if (!(n > 0.0)) throw DomainError("g_kappa: n must be positive");
  if (!(kappa > 0.0)) throw DomainError("g_kappa: kappa must be positive");
  if (n > resc.n_bar(kappa)) throw DomainError("g_kappa: n beyond the admissible range");
  const double value = (1.0 + kappa - resc.pbar(n)) / kappa - 1.0 / n;
  const double deriv = 1.0 / (n * n) - resc.pbar_prime(n) / kappa;
  return {value, deriv};
}

struct NCrossResult {
  double n_cross = 1.0;
  bool degenerate = false;  // kappa == kappa*: zero-amplitude equilibrium
};

/// The nontrivial zero of g_kappa; lies in (0,1) for kappa < kappa* and in
/// (1, n_bar) for kappa > kappa*.
inline NCrossResult n_cross(double kappa, const RescaledPressure& resc) {
  const double kstar = resc.kappa_star();
  if (std::abs(kappa - kstar) <= 1e-12 * std::max(kappa, kstar)) return {1.0, true};
  auto g = [&](double n) { return g_kappa(n, kappa, resc).first; };
  double lo, hi;
  if (kappa < kstar) {
    lo = 1e-3;
    for (int k = 0; k < 300 && g(lo) >= 0.0; ++k) lo *= 0.5;
    if (g(lo) >= 0.0) throw NumericError("n_cross: no lower bracket");
    hi = 1.0 - 1e-9;
    for (int k = 0; k < 60 && g(hi) <= 0.0; ++k) hi = 1.0 - (1.0 - hi) * 0.5;
    if (g(hi) <= 0.0) throw NumericError("n_cross: no upper bracket");
  } else {
    const double nbar = resc.n_bar(kappa);
    lo = 1.0 + 1e-9 * std::max(1.0, nbar);
    for (int k = 0; k < 60 && g(lo) <= 0.0; ++k) lo = 1.0 + (lo - 1.0) * 0.5;
    if (g(lo) <= 0.0) throw NumericError("n_cross: no lower bracket");
    hi = nbar * (1.0 - 1e-13);
    if (g(hi) >= 0.0) throw NumericError("n_cross: no upper bracket");
  }
  double n = brent(g, lo, hi, 1e-14, 200);
  for (int it = 0; it < 4; ++it) {  // Newton polish with the exact derivative
    auto [v, d] = g_kappa(n, kappa, resc);
    if (d == 0.0) break;
    n -= v / d;
  }
  return {n, false};
}

/// Inverse of the equilibrium map: the kappa whose g has its nontrivial zero
/// at the given n != 1.
inline double kappa_of_n(double n, const RescaledPressure& resc) {
  if (!(n > 0.0)) throw DomainError("kappa_of_n: n must be positive");
  if (std::abs(n - 1.0) < 1e-12) throw DomainError("kappa_of_n: n = 1 is the trivial zero");
  return n * (resc.pbar(n) - 1.0) / (n - 1.0);
}

struct TauSharp {
  double n_hash = 1.0;
  double tau_hash = 1.0;
};

/// Admissibility threshold: n_# solves pbar + n pbar' = 1 + kappa and
/// tau_#(kappa) = kappa / (n_#^2 pbar'(n_#)). Verifies the tangency of the
/// line tau_# n with the graph of r_kappa.
inline TauSharp tau_sharp(double kappa, const RescaledPressure& resc) {
  if (!(kappa > 0.0)) throw DomainError("tau_sharp: kappa must be positive");
  auto h = [&](double n) { return resc.pbar(n) + n * resc.pbar_prime(n) - (1.0 + kappa); };
  auto [lo, hi] = expand_bracket_upward(h, 1e-12, 1.0);
  double nh = brent(h, lo, hi, 1e-14, 200);
  for (int it = 0; it < 4; ++it) {
    const double hp = 2.0 * resc.pbar_prime(nh) + nh * (resc.n_star * resc.n_star *
                      resc.law.second(resc.n_star * nh) / resc.p_star);
    if (hp == 0.0) break;
    nh -= h(nh) / hp;
  }
  TauSharp out;
  out.n_hash = nh;
  out.tau_hash = kappa / (nh * nh * resc.pbar_prime(nh));
  const double t1 = resc.r_kappa(kappa, nh) - out.tau_hash * nh;
  const double t2 = resc.r_kappa_prime(kappa, nh) - out.tau_hash;
  if (std::abs(t1) > 1e-10 * std::max(1.0, out.tau_hash * nh) ||
      std::abs(t2) > 1e-10 * std::max(1.0, out.tau_hash))
    throw NumericError("tau_sharp: tangency verification failed");
  return out;
}

struct EquilibriumPair {
  double n_cross_eps = 1.0;
  double r_cross_eps = 1.0;        // equals n_cross_eps
  double first_order_coeff = 0.0;  // d n_x^eps / d eps at eps = 0, negative
};

/// Nontrivial equilibrium of the positive-temperature system:
/// g_kappa(n) = eps (1 - tau)/kappa (n - 1), with r = n.
inline EquilibriumPair n_cross_eps(double kappa, double tau, double eps,
                                   const RescaledPressure& resc) {
  if (!(eps >= 0.0)) throw DomainError("n_cross_eps: eps must be nonnegative");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("n_cross_eps: tau must lie in (0,1)");
  const NCrossResult base = n_cross(kappa, resc);
  if (base.degenerate) throw ZeroAmplitudeError("n_cross_eps: kappa equals kappa*");
  const double slope = eps * (1.0 - tau) / kappa;
  EquilibriumPair out;
  auto gp = g_kappa(base.n_cross, kappa, resc).second;
  out.first_order_coeff = (1.0 - tau) / kappa * (base.n_cross - 1.0) / gp;
  if (!(out.first_order_coeff < 0.0))
    throw NumericError("n_cross_eps: first-order coefficient is not negative");
  if (eps == 0.0) {
    out.n_cross_eps = out.r_cross_eps = base.n_cross;
    return out;
  }
  auto fdf = [&](double n) {
    auto [v, d] = g_kappa(n, kappa, resc);
    return std::pair<double, double>{v - slope * (n - 1.0), d - slope};
  };
  const double kstar = resc.kappa_star();
  double lo, hi;
  if (kappa > kstar) {
    lo = 1.0 + 1e-9 * std::max(1.0, base.n_cross);
    hi = resc.n_bar(kappa) * (1.0 - 1e-13);
  } else {
    lo = 1e-12;
    hi = 1.0 - 1e-9;
  }
  if (fdf(lo).first * fdf(hi).first > 0.0) {
    // grid scan fallback for a sign change
    bool found = false;
    double prev = lo, fprev = fdf(lo).first;
    for (int i = 1; i <= 64; ++i) {
      const double x = lo + (hi - lo) * i / 64.0;
      const double fx = fdf(x).first;
      if (fprev * fx <= 0.0) {
        lo = prev;
        hi = x;
        found = true;
        break;
      }
      prev = x;
      fprev = fx;
    }
    if (!found) throw NumericError("n_cross_eps: no bracket for the perturbed equilibrium");
  }
  out.n_cross_eps = newton_safeguarded(fdf, base.n_cross, lo, hi, 1e-15, 200);
  out.r_cross_eps = out.n_cross_eps;
  return out;
}

// ---------------------------------------------------------------------------
// Viscous profiles
// ---------------------------------------------------------------------------

struct ProfileOptions {
  double rtol = 1e-10;        // explicit integrator
  double atol = 1e-12;
  double stiff_rtol = 1e-8;   // implicit integrator
  double stiff_atol = 1e-10;
  double endpoint_tol = 1e-8; // relative to jump amplitude
  double offset = 1e-6;       // manifold offset, relative
  double span_budget = 1e6;
  int target_points = 4000;   // resampling density of the reported grid
  long max_steps = 2000000;
};

/// A sampled heteroclinic orbit in physical conservative variables, with the
/// asymptotic states and the wave speed (zero in a comoving frame).
struct ProfileSolution {
  std::vector<double> y;
  std::vector<Vec> states;
  Vec W_minus, W_plus;  // y -> -inf / y -> +inf limits
  double c = 0.0;
  double residual_sup = 0.0;
  bool monotone = false;
};

struct ResidualReport {
  double sup = 0.0;                // over interior points, scaled
  std::vector<double> pointwise;   // per sample
};

/// A posteriori defect of D(W) W' = F(W) - F(W-) - c (W - W-) on the sampled
/// grid; W' by five-point finite differences on the (nonuniform) abscissae.
/// Scaled by 1 + |F(W-)|.
inline ResidualReport profile_residual_detail(const ModelDescriptor& model,
                                              const ProfileSolution& prof, double c) {
  const int N = static_cast<int>(prof.y.size());
  if (N < 3) throw DomainError("profile_residual: need at least 3 points");
  const Vec Fref = model.flux(prof.W_minus);
  const double scale = 1.0 + Fref.cwiseAbs().maxCoeff();
  ResidualReport rep;
  rep.pointwise.resize(N);
  const int width = std::min(5, N);
  for (int i = 0; i < N; ++i) {
    int lo = std::clamp(i - width / 2, 0, N - width);
    std::vector<double> nodes(prof.y.begin() + lo, prof.y.begin() + lo + width);
    const std::vector<double> w = fd_weights(prof.y[i], nodes, 1);
    Vec dW = Vec::Zero(model.dim());
    for (int j = 0; j < width; ++j) dW += w[j] * prof.states[lo + j];
    const Vec res = model.diffusion(prof.states[i]) * dW -
                    (model.flux(prof.states[i]) - Fref - c * (prof.states[i] - prof.W_minus));
    rep.pointwise[i] = res.cwiseAbs().maxCoeff() / scale;
    if (i > 0 && i < N - 1) rep.sup = std::max(rep.sup, rep.pointwise[i]);
  }
  return rep;
}

inline double profile_residual(const ModelDescriptor& model, const ProfileSolution& prof,
                               double c) {
  return profile_residual_detail(model, prof, c).sup;
}

namespace detail {

inline bool strictly_monotone(const std::vector<double>& v) {
  if (v.size() < 2) return true;
  const bool up = v.back() > v.front();
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    if (up && !(v[i + 1] > v[i])) return false;
    if (!up && !(v[i + 1] < v[i])) return false;
  }
  return true;
}

/// Sampled trajectory of a 1D/2D shooting run in internal time s >= 0.
struct ShotRecord {
  std::vector<double> s;
  std::vector<Vec> ys;
};

}  // namespace detail

/// Temperature-less profile: the scalar reduced equation for the rescaled
/// carrier density, with the hybrid density reconstructed from r_kappa.
inline ProfileSolution profile_theta0(const ReducedParams& rp, const ProfileOptions& opts = {}) {
  if (rp.theta != 0.0 || rp.eps != 0.0)
    throw DomainError("profile_theta0: model temperature must be zero");
  const RescaledPressure& resc = rp.resc;
  const double kappa = rp.kappa;
  const NCrossResult ncr = n_cross(kappa, resc);
  if (ncr.degenerate)
    throw ZeroAmplitudeError("profile_theta0: kappa equals kappa*, zero-amplitude jump");
  const TauSharp ts = tau_sharp(kappa, resc);
  if (!(rp.tau < ts.tau_hash))
    throw AdmissibilityError(
        "profile_theta0: tau >= tau_#, the particle density would vanish along the connection");

  const double nx = ncr.n_cross;
  const double amp = std::abs(1.0 - nx);
  const double nbar = resc.n_bar(kappa);
  auto rhs_scalar = [&](double n) {
    if (!(n > 0.0 && n < nbar)) return std::numeric_limits<double>::quiet_NaN();
    const double r = resc.r_kappa(kappa, n);
    const double T = 1.0 / r - 1.0 / n;
    return kappa * r * r * T / (rp.u_star * (r - rp.tau * n) * resc.pbar_prime(n));
  };
  const double sigma = (1.0 - nx) > 0 ? 1.0 : -1.0;
  const double n0 = nx + sigma * 1e-6 * amp;
  const double dir = ((1.0 - n0) * rhs_scalar(n0) > 0.0) ? 1.0 : -1.0;
  auto f = [&](const Vec& y) {
    Vec out(1);
    out[0] = dir * rhs_scalar(y[0]);
    return out;
  };
  const double end_tol = opts.endpoint_tol * amp;

  OdeOptions oopt;
  oopt.rtol = opts.rtol;
  oopt.atol = opts.atol;
  oopt.max_steps = opts.max_steps;
  Vec y0(1);
  y0 << n0;

  auto stopper = [&](double s, const Vec& y) {
    if (std::abs(y[0] - 1.0) < end_tol) return StepCmd::StopSuccess;
    if (s > opts.span_budget || std::abs(y[0] - nx) > 2.0 * amp) return StepCmd::StopFail;
    return StepCmd::Continue;
  };

  // pilot pass to find the span, then rerun on a capped grid
  OdeResult pilot = integrate_rk45(f, 0.0, y0, oopt, stopper);
  if (!pilot.success)
    throw NumericError("profile_theta0: integration failed to reach the far state");
  oopt.max_step = std::max(pilot.s_end / opts.target_points, 1e-300);
  detail::ShotRecord rec;
  rec.s.push_back(0.0);
  rec.ys.push_back(y0);
  OdeResult run = integrate_rk45(f, 0.0, y0, oopt, [&](double s, const Vec& y) {
    rec.s.push_back(s);
    rec.ys.push_back(y);
    return stopper(s, y);
  });
  if (!run.success) throw NumericError("profile_theta0: resampling pass failed");

  // map to physical conservative states, oriented with ascending y
  const double w_star = rp.r_star * rp.u_star;
  const int N = static_cast<int>(rec.s.size());
  ProfileSolution prof;
  prof.c = 0.0;
  prof.y.resize(N);
  prof.states.resize(N);
  std::vector<double> nhat(N);
  for (int i = 0; i < N; ++i) {
    const int k = dir > 0 ? i : N - 1 - i;
    prof.y[i] = dir * rec.s[k];
    nhat[i] = rec.ys[k][0];
    const double n = rp.n_star * nhat[i];
    const double r = rp.r_star * resc.r_kappa(kappa, nhat[i]);
    if (!(r - n > 0.0))
      throw AdmissibilityError("profile_theta0: particle density vanished along the orbit");
    Vec W(3);
    W << r, r - n, w_star;
    prof.states[i] = W;
  }
  // shift the abscissa so that the rescaled density midpoint sits at y = 0
  const double mid = 0.5 * (1.0 + nx);
  double shift = prof.y.front();
  for (int i = 0; i + 1 < N; ++i) {
    if ((nhat[i] - mid) * (nhat[i + 1] - mid) <= 0.0) {
      const double t = (mid - nhat[i]) / (nhat[i + 1] - nhat[i]);
      shift = prof.y[i] + t * (prof.y[i + 1] - prof.y[i]);
      break;
    }
  }
  for (auto& yy : prof.y) yy -= shift;

  Vec Weq(3), Wbase(3);
  const double n_eq = rp.n_star * nx, r_eq = rp.r_star * nx;
  Weq << r_eq, r_eq - n_eq, w_star;
  Wbase << rp.r_star, rp.r_star - rp.n_star, w_star;
  prof.W_minus = dir > 0 ? Weq : Wbase;
  prof.W_plus = dir > 0 ? Wbase : Weq;
  prof.monotone = detail::strictly_monotone(nhat);
  prof.residual_sup =
      profile_residual(ModelDescriptor::euler(0.0, resc.law), prof, 0.0);
  return prof;
}

namespace detail {

/// Physical (n, r) vector field of the positive-temperature comoving profile
/// system; rho = r - n and w is frozen at w*.
struct PostempField {
  const ReducedParams* rp;

  Vec operator()(const Vec& x) const {
    const double n = x[0], r = x[1];
    const double rho = r - n;
    if (!(n > 0.0 && r > 0.0 && rho > 0.0))
      return Vec::Constant(2, std::numeric_limits<double>::quiet_NaN());
    const double w = rp->r_star * rp->u_star;
    const PressureLaw& law = rp->resc.law;
    const double p = law.value(n);
    const double dp = law.deriv(n);
    const double rho_star = rp->r_star - rp->n_star;
    const double B = 1.0 / r - 1.0 / rp->r_star +
                     (p - rp->p_star + rp->theta * (rho - rho_star)) / (w * w);
    Vec out(2);
    out[0] = ((w / n) * (n / r - rp->n_star / rp->r_star) - (w * n / rho) * B) * r * r /
             (rho * dp + rp->theta * n);
    out[1] = -(w * r * r / (rho * rp->theta)) * B;
    return out;
  }
};

}  // namespace detail

/// Positive-temperature profile by shooting from the transverse eigendirection
/// of the perturbed equilibrium, integrated with the stiff (L-stable implicit)
/// one-step method.
inline ProfileSolution profile_theta(const ReducedParams& rp, const ProfileOptions& opts = {}) {
  if (!(rp.eps > 0.0)) throw DomainError("profile_theta: requires positive temperature");
  const RescaledPressure& resc = rp.resc;
  const TauSharp ts = tau_sharp(rp.kappa, resc);
  if (!(rp.tau < ts.tau_hash))
    throw AdmissibilityError("profile_theta: tau >= tau_#");
  const EquilibriumPair eq = n_cross_eps(rp.kappa, rp.tau, rp.eps, resc);

  const double n_eq = rp.n_star * eq.n_cross_eps;
  const double r_eq = rp.r_star * eq.r_cross_eps;
  Vec xeq(2), xtarget(2);
  xeq << n_eq, r_eq;
  xtarget << rp.n_star, rp.r_star;
  const double amp = (xeq - xtarget).norm();
  if (!(amp > 0.0)) throw ZeroAmplitudeError("profile_theta: zero-amplitude jump");

  detail::PostempField field{&rp};
  // finite-difference Jacobian at the equilibrium
  Mat J(2, 2);
  const Vec feq = field(xeq);
  for (int j = 0; j < 2; ++j) {
    const double h = 1e-7 * (1.0 + std::abs(xeq[j]));
    Vec xp = xeq, xm = xeq;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (field(xp) - field(xm)) / (2.0 * h);
  }
  (void)feq;
  Eigen::EigenSolver<Mat> es(J);
  if (es.info() != Eigen::Success) throw NumericError("profile_theta: eigensolver failed");
  const CVec ev = es.eigenvalues();
  const double scale_ev = ev.cwiseAbs().maxCoeff();
  if (std::abs(ev[0].imag()) > 1e-8 * scale_ev || std::abs(ev[1].imag()) > 1e-8 * scale_ev)
    throw NumericError("profile_theta: complex eigenvalues at the equilibrium");
  const int iu = ev[0].real() > ev[1].real() ? 0 : 1;
  const int is = 1 - iu;
  if (!(ev[iu].real() > 0.0 && ev[is].real() < 0.0))
    throw ConnectionNotFoundError("profile_theta: equilibrium is not a saddle");

  OdeOptions oopt;
  oopt.rtol = opts.stiff_rtol;
  oopt.atol = opts.stiff_atol;
  oopt.max_steps = opts.max_steps;

  const double end_tol = opts.endpoint_tol * amp;
  const double rho_floor = kDensityFloor * std::max(1.0, rp.r_star);

  detail::ShotRecord rec;
  double dir_found = 0.0;
  bool rho_vanished = false;
  for (double dir : {+1.0, -1.0}) {
    const Vec v = es.eigenvectors().col(dir > 0 ? iu : is).real().normalized();
    auto f = [&](const Vec& x) -> Vec { return dir * field(x); };
    for (double sgn : {+1.0, -1.0}) {
      const Vec x0 = xeq + sgn * opts.offset * amp * v;
      if (!(x0[1] - x0[0] > rho_floor)) continue;
      bool bad_rho = false;
      auto stopper = [&](double s, const Vec& x) {
        if (!(x[1] - x[0] > rho_floor)) {
          bad_rho = true;
          return StepCmd::StopFail;
        }
        if ((x - xtarget).norm() < end_tol) return StepCmd::StopSuccess;
        if ((x - xeq).norm() > 20.0 * amp || s > opts.span_budget) return StepCmd::StopFail;
        return StepCmd::Continue;
      };
      OdeOptions pilot_opt = oopt;
      OdeResult pilot = integrate_rosenbrock23(f, 0.0, x0, pilot_opt, stopper);
      if (!pilot.success) {
        if (bad_rho) rho_vanished = true;
        continue;
      }
      pilot_opt.max_step = std::max(pilot.s_end / opts.target_points, 1e-300);
      rec = {};
      rec.s.push_back(0.0);
      rec.ys.push_back(x0);
      OdeResult run = integrate_rosenbrock23(f, 0.0, x0, pilot_opt, [&](double s, const Vec& x) {
        rec.s.push_back(s);
        rec.ys.push_back(x);
        return stopper(s, x);
      });
      if (run.success) {
        dir_found = dir;
        break;
      }
    }
    if (dir_found != 0.0) break;
  }
  if (dir_found == 0.0) {
    if (rho_vanished)
      throw AdmissibilityError("profile_theta: particle density vanished along the orbit");
    throw ConnectionNotFoundError("profile_theta: no manifold direction connects to the base state");
  }

  const double w_star = rp.r_star * rp.u_star;
  const int N = static_cast<int>(rec.s.size());
  ProfileSolution prof;
  prof.c = 0.0;
  prof.y.resize(N);
  prof.states.resize(N);
  std::vector<double> ncomp(N);
  for (int i = 0; i < N; ++i) {
    const int k = dir_found > 0 ? i : N - 1 - i;
    prof.y[i] = dir_found * rec.s[k];
    const double n = rec.ys[k][0], r = rec.ys[k][1];
    ncomp[i] = n;
    Vec W(3);
    W << r, r - n, w_star;
    prof.states[i] = W;
  }
  const double shift = 0.5 * (prof.y.front() + prof.y.back());
  for (auto& yy : prof.y) yy -= shift;

  Vec Weq(3), Wbase(3);
  Weq << r_eq, r_eq - n_eq, w_star;
  Wbase << rp.r_star, rp.r_star - rp.n_star, w_star;
  prof.W_minus = dir_found > 0 ? Weq : Wbase;
  prof.W_plus = dir_found > 0 ? Wbase : Weq;
  prof.monotone = detail::strictly_monotone(ncomp);
  prof.residual_sup =
      profile_residual(ModelDescriptor::euler(rp.theta, resc.law), prof, 0.0);
  return prof;
}

/// Burgers viscous profile connecting W* (as y -> -inf) to Wx (as y -> +inf):
/// shoots forward along the unstable direction at W* or backward along the
/// stable direction at Wx, whichever endpoint is a saddle. Fails with a
/// connection error when the jump is on the wrong side of the entropy
/// criterion.
inline ProfileSolution profile_burgers(const Vec& Wstar, const Vec& Wcross, double c,
                                       double theta, const ProfileOptions& opts = {}) {
  if (!(theta > 0.0)) throw DomainError("profile_burgers: requires theta > 0");
  const ModelDescriptor model = ModelDescriptor::burgers(theta);
  const double amp = (Wcross - Wstar).norm();
  if (amp <= 1e-14 * (1.0 + Wstar.norm()))
    throw ZeroAmplitudeError("profile_burgers: coincident end states");
  const Vec rh = rh_residual(model, Wstar, Wcross, c);
  if (rh.cwiseAbs().maxCoeff() > 1e-10 * (1.0 + model.flux(Wstar).cwiseAbs().maxCoeff()))
    throw DomainError("profile_burgers: end states do not satisfy the jump conditions");

  const Vec Fstar = model.flux(Wstar);
  auto field = [&](const Vec& W) -> Vec {
    if (!(1.0 + W[0] > 0.0)) return Vec::Constant(2, std::numeric_limits<double>::quiet_NaN());
    const Mat D = model.diffusion(W);
    const double det = D.determinant();
    if (std::abs(det) < 1e-14) throw NumericError("profile_burgers: singular diffusion matrix");
    return D.inverse() * (model.flux(W) - Fstar - c * (W - Wstar));
  };

  OdeOptions oopt;
  oopt.rtol = opts.rtol;
  oopt.atol = opts.atol;
  oopt.max_steps = opts.max_steps;
  const double end_tol = opts.endpoint_tol * amp;

  struct Attempt {
    Vec from, to;
    double dir;
    bool want_unstable;
  };
  const Attempt attempts[2] = {{Wstar, Wcross, +1.0, true}, {Wcross, Wstar, -1.0, false}};

  detail::ShotRecord rec;
  double dir_found = 0.0;
  Vec from_found, to_found;
  for (const Attempt& at : attempts) {
    const Mat D = model.diffusion(at.from);
    if (std::abs(D.determinant()) < 1e-14) continue;
    const Mat J = D.inverse() * (model.jacobian(at.from) - c * Mat::Identity(2, 2));
    Eigen::EigenSolver<Mat> es(J);
    if (es.info() != Eigen::Success) continue;
    const CVec ev = es.eigenvalues();
    const double sc = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    if (std::abs(ev[0].imag()) > 1e-10 * sc || std::abs(ev[1].imag()) > 1e-10 * sc) continue;
    const int iu = ev[0].real() > ev[1].real() ? 0 : 1;
    const int is = 1 - iu;
    if (!(ev[iu].real() > 0.0 && ev[is].real() < 0.0)) continue;  // need a saddle
    const Vec v = es.eigenvectors().col(at.want_unstable ? iu : is).real().normalized();

    auto f = [&](const Vec& W) -> Vec { return at.dir * field(W); };
    for (double sgn : {+1.0, -1.0}) {
      const Vec W0 = at.from + sgn * opts.offset * amp * v;
      if (!(W0[0] > kDensityFloor)) continue;
      auto stopper = [&](double s, const Vec& W) {
        if (!(W[0] > kDensityFloor)) return StepCmd::StopFail;
        if ((W - at.to).norm() < end_tol) return StepCmd::StopSuccess;
        if ((W - at.from).norm() > 10.0 * amp || s > opts.span_budget) return StepCmd::StopFail;
        return StepCmd::Continue;
      };
      OdeOptions popt = oopt;
      OdeResult pilot;
      try {
        pilot = integrate_rk45(f, 0.0, W0, popt, stopper);
      } catch (const NumericError&) {
        continue;  // singular diffusion on this path
      }
      if (!pilot.success) continue;
      popt.max_step = std::max(pilot.s_end / opts.target_points, 1e-300);
      rec = {};
      rec.s.push_back(0.0);
      rec.ys.push_back(W0);
      const OdeResult run = integrate_rk45(f, 0.0, W0, popt, [&](double s, const Vec& W) {
        rec.s.push_back(s);
        rec.ys.push_back(W);
        return stopper(s, W);
      });
      if (run.success) {
        dir_found = at.dir;
        from_found = at.from;
        to_found = at.to;
        break;
      }
    }
    if (dir_found != 0.0) break;
  }
  if (dir_found == 0.0)
    throw ConnectionNotFoundError(
        "profile_burgers: no connection from W* to Wx (inadmissible jump or no saddle)");

  const int N = static_cast<int>(rec.s.size());
  ProfileSolution prof;
  prof.c = c;
  prof.y.resize(N);
  prof.states.resize(N);
  std::vector<double> rho_comp(N);
  for (int i = 0; i < N; ++i) {
    const int k = dir_found > 0 ? i : N - 1 - i;
    prof.y[i] = dir_found * rec.s[k];
    prof.states[i] = rec.ys[k];
    rho_comp[i] = rec.ys[k][0];
  }
  const double shift = 0.5 * (prof.y.front() + prof.y.back());
  for (auto& yy : prof.y) yy -= shift;
  prof.W_minus = Wstar;
  prof.W_plus = Wcross;
  prof.monotone = detail::strictly_monotone(rho_comp);
  prof.residual_sup = profile_residual(model, prof, c);
  return prof;
}

}  // namespace fpflow
