#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "fpflow/common.hpp"

namespace fpflow {

/// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
template <class F>
double brent(F&& f, double a, double b, double xtol = 1e-14, int maxit = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw NumericError("brent: root not bracketed");
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < maxit; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, rr = fb / fc;
        p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
        q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
  }
  throw NumericError("brent: no convergence after max iterations");
}

/// Plain bisection; assumes f(a) f(b) <= 0.
template <class F>
double bisect(F&& f, double a, double b, double xtol = 1e-14, int maxit = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw NumericError("bisect: root not bracketed");
  for (int it = 0; it < maxit; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0 || 0.5 * (b - a) < xtol) return m;
    if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; }
  }
  return 0.5 * (a + b);
}

/// Newton iteration restricted to [lo, hi]; bisects whenever the Newton step
/// leaves the interval or fails to shrink it. Requires f(lo) f(hi) <= 0.
template <class FDF>
double newton_safeguarded(FDF&& fdf, double x0, double lo, double hi,
                          double xtol = 1e-13, int maxit = 100) {
  auto [flo, dlo] = fdf(lo);
  auto [fhi, dhi] = fdf(hi);
  (void)dlo; (void)dhi;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw NumericError("newton_safeguarded: root not bracketed");
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < maxit; ++it) {
    auto [fx, dx] = fdf(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (flo > 0)) lo = x; else hi = x;
    double xn = (dx != 0.0) ? x - fx / dx : lo - 1.0;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < xtol * (1.0 + std::abs(xn))) return xn;
    x = xn;
  }
  throw NumericError("newton_safeguarded: no convergence");
}

/// Expand hi upward until f changes sign on [lo, hi]; for coercive f.
template <class F>
std::pair<double, double> expand_bracket_upward(F&& f, double lo, double hi0,
                                                int max_doublings = 200) {
  double hi = hi0;
  const double flo = f(lo);
  for (int k = 0; k < max_doublings; ++k) {
    if (flo * f(hi) <= 0.0) return {lo, hi};
    hi *= 2.0;
  }
  throw NumericError("expand_bracket_upward: no sign change found");
}

}  // namespace fpflow
