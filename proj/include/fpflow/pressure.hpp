#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "fpflow/common.hpp"
#include "fpflow/rootfind.hpp"

namespace fpflow {

/// Barotropic pressure law p(n): strictly increasing, strictly convex,
/// coercive, with p(0) = 0. Either an exact power law p = C n^gamma or a
/// user-supplied (tabulated) triple of callbacks.
class PressureLaw {
 public:
  struct Eval {
    double p, dp, d2p;
  };

  static PressureLaw gamma_law(double C, double gamma) {
    if (!(C > 0.0)) throw DomainError("gamma law: C must be positive");
    if (!(gamma > 1.0)) throw DomainError("gamma law: gamma must exceed 1");
    PressureLaw law;
    law.gamma_form_ = true;
    law.C_ = C;
    law.gamma_ = gamma;
    return law;
  }

  static PressureLaw tabulated(std::function<double(double)> p,
                               std::function<double(double)> dp,
                               std::function<double(double)> d2p) {
    PressureLaw law;
    law.gamma_form_ = false;
    law.p_ = std::move(p);
    law.dp_ = std::move(dp);
    law.d2p_ = std::move(d2p);
    law.validate_samples();
    return law;
  }

  bool gamma_form() const { return gamma_form_; }
  double coefficient() const { return C_; }
  double exponent() const { return gamma_; }

  double value(double n) const {
    check_domain(n);
    if (n == 0.0) return 0.0;
    return gamma_form_ ? C_ * std::pow(n, gamma_) : p_(n);
  }

  double deriv(double n) const {
    check_domain(n);
    return gamma_form_ ? C_ * gamma_ * std::pow(n, gamma_ - 1.0) : dp_(n);
  }

  double second(double n) const {
    check_domain(n);
    return gamma_form_ ? C_ * gamma_ * (gamma_ - 1.0) * std::pow(n, gamma_ - 2.0) : d2p_(n);
  }

  Eval eval(double n) const { return {value(n), deriv(n), second(n)}; }

  /// p^{-1}(y) for y >= 0; closed form for the power law, otherwise a
  /// bracketed solve (coercivity guarantees an upper bracket exists).
  double inverse(double y) const {
    if (!(y >= 0.0)) throw DomainError("pressure inverse: negative argument");
    if (y == 0.0) return 0.0;
    if (gamma_form_) return std::pow(y / C_, 1.0 / gamma_);
    auto f = [&](double n) { return value(n) - y; };
    auto [lo, hi] = expand_bracket_upward(f, 0.0, 1.0);
    double n = brent(f, lo, hi, 1e-14 * std::max(1.0, hi), 200);
    for (int it = 0; it < 4; ++it) {  // Newton polish
      const double dp = deriv(n);
      if (dp <= 0.0) break;
      n -= (value(n) - y) / dp;
    }
    if (!(std::abs(value(n) - y) <= 1e-12 * std::max(1.0, y)))
      throw NumericError("pressure inverse: no convergence");
    return n;
  }

  /// Pi'(n) = int_0^n p'(s)/s ds. Exact for the power law; dyadic adaptive
  /// quadrature otherwise (the integrand may blow up at 0 but stays
  /// integrable for any admissible law).
  double pi_prime(double n) const {
    check_domain(n);
    if (n == 0.0) return 0.0;
    if (gamma_form_) return C_ * gamma_ / (gamma_ - 1.0) * std::pow(n, gamma_ - 1.0);
    auto integrand = [&](double s) { return dp_(s) / s; };
    return dyadic_integral(integrand, n);
  }

  /// Pi''(n) = p'(n)/n.
  double pi_second(double n) const {
    if (!(n > 0.0)) throw DomainError("pi_second: n must be positive");
    return deriv(n) / n;
  }

  /// Pi(n) with the normalization Pi(0) = 0.
  double pi(double n) const {
    check_domain(n);
    if (n == 0.0) return 0.0;
    if (gamma_form_) return C_ * std::pow(n, gamma_) / (gamma_ - 1.0);
    auto integrand = [&](double s) { return pi_prime(s); };
    return dyadic_integral(integrand, n);
  }

 private:
  PressureLaw() = default;

  void check_domain(double n) const {
    if (!(n >= 0.0)) throw DomainError("pressure law: negative density");
  }

  void validate_samples() const {
    if (std::abs(p_(0.0)) > 1e-12) throw DomainError("tabulated pressure: p(0) != 0");
    // 64 log-spaced points in (1e-6, 1e3)
    for (int i = 0; i < 64; ++i) {
      const double t = static_cast<double>(i) / 63.0;
      const double n = std::pow(10.0, -6.0 + 9.0 * t);
      if (!(dp_(n) > 0.0)) throw DomainError("tabulated pressure: p' <= 0 at sample");
      if (!(d2p_(n) > 0.0)) throw DomainError("tabulated pressure: p'' <= 0 at sample");
    }
  }

  // Sum of adaptive Simpson integrals over the dyadic pieces
  // [n 2^{-j-1}, n 2^{-j}]; each piece is free of endpoint singularities.
  template <class G>
  static double dyadic_integral(G&& g, double n) {
    double total = 0.0;
    double hi = n;
    for (int j = 0; j < 80; ++j) {
      const double lo = 0.5 * hi;
      const double piece = adaptive_simpson(g, lo, hi, 1e-13, 24);
      total += piece;
      if (std::abs(piece) < 1e-14 * std::max(1.0, std::abs(total)) && j > 4) return total;
      hi = lo;
    }
    return total;
  }

  template <class G>
  static double adaptive_simpson(G&& g, double a, double b, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double fa = g(a), fm = g(m), fb = g(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(g, a, b, fa, fm, fb, whole, tol, depth);
  }

  template <class G>
  static double simpson_rec(G&& g, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = g(lm), frm = g(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol * std::max(1.0, std::abs(left + right)))
      return left + right + (left + right - whole) / 15.0;
    return simpson_rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  bool gamma_form_ = true;
  double C_ = 1.0;
  double gamma_ = 2.0;
  std::function<double(double)> p_, dp_, d2p_;
};

}  // namespace fpflow
