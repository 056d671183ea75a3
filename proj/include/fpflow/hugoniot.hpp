#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fpflow/models.hpp"

namespace fpflow {

/// F(W) - F(W*) - c (W - W*).
inline Vec rh_residual(const ModelDescriptor& model, const Vec& Wstar, const Vec& W, double c) {
  return model.flux(W) - model.flux(Wstar) - c * (W - Wstar);
}

struct JumpState {
  Vec state;
  double c = 0.0;
};

struct BranchSample {
  double param = 0.0;
  Vec state;
  double c = 0.0;
  bool liu_ok = false;
};

struct HugoniotBranch {
  ModelKind kind = ModelKind::BurgersFP;
  double theta = 0.0;
  int sign = +1;                 // which characteristic family (+ / -)
  std::string param_name;       // "rho" (Burgers) or "n" (Euler)
  Vec W_star;
  double param_star = 0.0;
  double lambda_star = 0.0;      // characteristic speed of the family at W*
  std::vector<BranchSample> samples;
};

/// Far state and shock speed on the Burgers jump branch through
/// W* = (rho*, r* u*), parameterized by the far particle density.
inline JumpState burgers_jump(const Vec& Wstar, double theta, int sign, double rho) {
  if (!(rho >= 0.0)) throw DomainError("burgers_jump: rho must be nonnegative");
  const double rho_s = Wstar[0];
  if (!(rho_s > 0.0)) throw DomainError("burgers_jump: reference rho must be positive");
  const double r_s = 1.0 + rho_s;
  const double u_s = Wstar[1] / r_s;
  const double r = 1.0 + rho;
  const double Delta2 = 4.0 * rho_s * r;
  const double S = std::sqrt(u_s * u_s + theta * Delta2);
  const double a = (S + sign * u_s) / (2.0 * r);
  JumpState js;
  js.state = Vec(2);
  const double u = u_s + sign * (rho - rho_s) / rho_s * a;
  js.state << rho, (1.0 + rho) * u;
  js.c = u_s + sign * rho / rho_s * a;
  return js;
}

/// Far state and shock speed on the Euler jump branch through
/// W* = (r*, rho*, r* u*), parameterized by the far carrier density n.
/// Along the branch rho/n stays equal to rho*/n*.
inline JumpState euler_jump(const Vec& Wstar, const PressureLaw& law, double theta, int sign,
                            double n) {
  if (!(n > 0.0)) throw DomainError("euler_jump: n must be positive");
  const double r_s = Wstar[0], rho_s = Wstar[1];
  const double n_s = r_s - rho_s;
  if (!(n_s > 0.0) || !(rho_s > 0.0))
    throw DomainError("euler_jump: reference state needs positive n and rho");
  const double u_s = Wstar[2] / r_s;
  const double rho = n * rho_s / n_s;
  const double r = n + rho;
  // [[p]]/[[n]] with the removable singularity at n = n*
  const double dn = n - n_s;
  const double slope = std::abs(dn) < 1e-8 * n_s ? law.deriv(n_s)
                                                 : (law.value(n) - law.value(n_s)) / dn;
  const double rad = (theta * rho_s / n_s + slope) / (r_s * n);
  if (!(rad >= 0.0)) throw NumericError("euler_jump: negative radicand");
  const double q = std::sqrt(rad);
  const double u = u_s + sign * dn * q;
  JumpState js;
  js.state = Vec(3);
  js.state << r, rho, r * u;
  js.c = u_s + sign * n * q;
  return js;
}

namespace detail {

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("branch: bad parameter range");
  std::vector<double> xs(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) xs[i] = std::exp(a + (b - a) * i / (n - 1.0));
  return xs;
}

/// Log-spaced samples over [lo, hi]; when param* is interior the nearest
/// sample is snapped onto it, keeping the sample count fixed.
inline std::vector<double> branch_params(double lo, double hi, int n, double pstar) {
  std::vector<double> xs = log_spaced(lo, hi, n);
  if (pstar > lo && pstar < hi) {
    size_t nearest = 0;
    for (size_t i = 1; i < xs.size(); ++i)
      if (std::abs(xs[i] - pstar) < std::abs(xs[nearest] - pstar)) nearest = i;
    xs[nearest] = pstar;
    std::sort(xs.begin(), xs.end());
  }
  return xs;
}

}  // namespace detail

inline HugoniotBranch burgers_branch(const Vec& Wstar, double theta, int sign, double rho_lo,
                                     double rho_hi, int n_samples) {
  HugoniotBranch br;
  br.kind = ModelKind::BurgersFP;
  br.theta = theta;
  br.sign = sign;
  br.param_name = "rho";
  br.W_star = Wstar;
  br.param_star = Wstar[0];
  const ModelDescriptor model = ModelDescriptor::burgers(theta);
  const Vec lam = model.closed_form_eigenvalues(Wstar);
  br.lambda_star = sign > 0 ? lam[lam.size() - 1] : lam[0];
  for (double rho : detail::branch_params(rho_lo, rho_hi, n_samples, br.param_star)) {
    const JumpState js = burgers_jump(Wstar, theta, sign, rho);
    BranchSample s;
    s.param = rho;
    s.state = js.state;
    s.c = js.c;
    s.liu_ok = js.c < br.lambda_star;  // monotone speed: admissible side lies below lambda*
    br.samples.push_back(std::move(s));
  }
  return br;
}

inline HugoniotBranch euler_branch(const Vec& Wstar, const PressureLaw& law, double theta,
                                   int sign, double n_lo, double n_hi, int n_samples) {
  HugoniotBranch br;
  br.kind = ModelKind::EulerFP;
  br.theta = theta;
  br.sign = sign;
  br.param_name = "n";
  br.W_star = Wstar;
  br.param_star = Wstar[0] - Wstar[1];
  const ModelDescriptor model = ModelDescriptor::euler(theta, law);
  const Vec lam = model.closed_form_eigenvalues(Wstar);
  br.lambda_star = sign > 0 ? lam[2] : lam[0];
  for (double n : detail::branch_params(n_lo, n_hi, n_samples, br.param_star)) {
    const JumpState js = euler_jump(Wstar, law, theta, sign, n);
    BranchSample s;
    s.param = n;
    s.state = js.state;
    s.c = js.c;
    s.liu_ok = js.c < br.lambda_star;
    br.samples.push_back(std::move(s));
  }
  return br;
}

struct LiuReport {
  std::vector<bool> admissible;   // per sample
  bool speed_monotone = false;    // d c / d param has one sign along the branch
  int speed_trend = 0;            // +1 increasing, -1 decreasing
};

/// Checks the sampled speed monotonicity and re-derives the per-sample
/// admissibility flags from the speed comparison with the characteristic
/// value at the reference state.
inline LiuReport liu_check(const HugoniotBranch& br) {
  if (br.samples.size() < 3) throw DomainError("liu_check: need at least 3 samples");
  LiuReport rep;
  int pos = 0, neg = 0;
  for (size_t i = 0; i + 1 < br.samples.size(); ++i) {
    const double dc = br.samples[i + 1].c - br.samples[i].c;
    const double dp = br.samples[i + 1].param - br.samples[i].param;
    const double slope = dc / dp;
    if (slope > 0) ++pos;
    else if (slope < 0) ++neg;
  }
  rep.speed_monotone = (pos == 0 || neg == 0);
  rep.speed_trend = pos > neg ? +1 : -1;
  for (const auto& s : br.samples) rep.admissible.push_back(s.c < br.lambda_star);
  return rep;
}

}  // namespace fpflow
