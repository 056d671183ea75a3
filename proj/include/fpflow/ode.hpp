#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "fpflow/common.hpp"

namespace fpflow {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = kInf;
  double init_step = 0.0;  // 0 = choose automatically
  long max_steps = 2000000;
};

enum class StepCmd { Continue, StopSuccess, StopFail };

struct OdeResult {
  bool success = false;       // a StopSuccess was issued
  bool step_failure = false;  // step size underflow / non-finite values
  double s_end = 0.0;
  Vec y_end;
  long n_steps = 0;
};

namespace detail {

inline double error_norm(const Vec& err, const Vec& y0, const Vec& y1,
                         double rtol, double atol) {
  double e = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    e = std::max(e, std::abs(err[i]) / sc);
  }
  return e;
}

template <class F>
double initial_step(F&& f, const Vec& y0, const Vec& f0, const OdeOptions& opt) {
  const double d0 = y0.norm();
  const double d1 = f0.norm();
  double h = (d0 > 1e-8 && d1 > 1e-8) ? 0.01 * d0 / d1 : 1e-6;
  return std::min(h, opt.max_step);
}

}  // namespace detail

/// Dormand-Prince 5(4) with adaptive step size. The system is autonomous:
/// f(y) -> dy/ds. Integration runs forward in s from s0; `cb(s, y)` is
/// invoked after every accepted step and controls termination.
template <class F, class CB>
OdeResult integrate_rk45(F&& f, double s0, const Vec& y0, const OdeOptions& opt, CB&& cb) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeResult res;
  double s = s0;
  Vec y = y0;
  Vec k1 = f(y);
  double h = opt.init_step > 0 ? opt.init_step : detail::initial_step(f, y, k1, opt);
  h = std::min(h, opt.max_step);

  for (long n = 0; n < opt.max_steps; ++n) {
    if (!(h > std::abs(s) * 1e-16 + 1e-300)) {
      res.step_failure = true;
      break;
    }
    const Vec k2 = f(y + h * (a21 * k1));
    const Vec k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    if (!ynew.allFinite()) {
      h *= 0.25;
      continue;
    }
    const Vec k7 = f(ynew);
    const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    if (!err.allFinite()) {
      h *= 0.25;
      continue;
    }
    const double en = detail::error_norm(err, y, ynew, opt.rtol, opt.atol);
    if (en <= 1.0) {
      s += h;
      y = ynew;
      k1 = k7;  // FSAL
      ++res.n_steps;
      const StepCmd cmd = cb(s, y);
      if (cmd != StepCmd::Continue) {
        res.success = (cmd == StepCmd::StopSuccess);
        break;
      }
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-16), -0.2), 0.2, 5.0);
    h = std::min(h * fac, opt.max_step);
  }
  res.s_end = s;
  res.y_end = y;
  return res;
}

/// L-stable Rosenbrock(2,3) pair with finite-difference Jacobians
/// (the classic modified Rosenbrock formula used for stiff systems).
/// Same calling convention as integrate_rk45.
template <class F, class CB>
OdeResult integrate_rosenbrock23(F&& f, double s0, const Vec& y0, const OdeOptions& opt, CB&& cb) {
  const double d = 1.0 / (2.0 + std::sqrt(2.0));
  const double e32 = 6.0 + std::sqrt(2.0);
  const int m = static_cast<int>(y0.size());

  auto fd_jacobian = [&](const Vec& y, const Vec& fy) {
    Mat J(m, m);
    for (int j = 0; j < m; ++j) {
      const double hj = 1e-7 * (1.0 + std::abs(y[j]));
      Vec yp = y;
      yp[j] += hj;
      J.col(j) = (f(yp) - fy) / hj;
    }
    return J;
  };

  OdeResult res;
  double s = s0;
  Vec y = y0;
  Vec f0 = f(y);
  double h = opt.init_step > 0 ? opt.init_step : detail::initial_step(f, y, f0, opt);
  h = std::min(h, opt.max_step);

  for (long n = 0; n < opt.max_steps; ++n) {
    if (!(h > std::abs(s) * 1e-16 + 1e-300)) {
      res.step_failure = true;
      break;
    }
    const Mat J = fd_jacobian(y, f0);
    const Mat W = Mat::Identity(m, m) - h * d * J;
    Eigen::PartialPivLU<Mat> lu(W);
    const Vec k1 = lu.solve(f0);
    const Vec f1 = f(y + 0.5 * h * k1);
    const Vec k2 = lu.solve(f1 - k1) + k1;
    const Vec ynew = y + h * k2;
    if (!ynew.allFinite()) {
      h *= 0.25;
      continue;
    }
    const Vec f2 = f(ynew);
    const Vec k3 = lu.solve(f2 - e32 * (k2 - f1) - 2.0 * (k1 - f0));
    const Vec err = (h / 6.0) * (k1 - 2.0 * k2 + k3);
    if (!err.allFinite()) {
      h *= 0.25;
      continue;
    }
    const double en = detail::error_norm(err, y, ynew, opt.rtol, opt.atol);
    if (en <= 1.0) {
      s += h;
      y = ynew;
      f0 = f2;
      ++res.n_steps;
      const StepCmd cmd = cb(s, y);
      if (cmd != StepCmd::Continue) {
        res.success = (cmd == StepCmd::StopSuccess);
        break;
      }
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-16), -1.0 / 3.0), 0.2, 5.0);
    h = std::min(h * fac, opt.max_step);
  }
  res.s_end = s;
  res.y_end = y;
  return res;
}

}  // namespace fpflow
