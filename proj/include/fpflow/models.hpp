#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "fpflow/common.hpp"
#include "fpflow/pressure.hpp"

namespace fpflow {

enum class ModelKind { BurgersFP, EulerFP };

/// Entropy value, gradient and hessian at a state.
struct EntropyPack {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

/// One of the two hydrodynamic fluid-particle systems in conservative form
/// dt W + dx F(W) = eps dx(D(W) dx W).
///
/// BurgersFP: W = (rho, w) with hybrid density r = 1 + rho and w = r u.
/// EulerFP:   W = (r, rho, w) with carrier density n = r - rho and w = r u.
///
/// The descriptor is immutable and all member functions are pure.
class ModelDescriptor {
 public:
  static ModelDescriptor burgers(double theta) {
    if (!(theta >= 0.0)) throw DomainError("model: theta must be nonnegative");
    return ModelDescriptor(ModelKind::BurgersFP, theta, std::nullopt);
  }

  static ModelDescriptor euler(double theta, PressureLaw law) {
    if (!(theta >= 0.0)) throw DomainError("model: theta must be nonnegative");
    return ModelDescriptor(ModelKind::EulerFP, theta, std::move(law));
  }

  ModelKind kind() const { return kind_; }
  double theta() const { return theta_; }
  int dim() const { return kind_ == ModelKind::BurgersFP ? 2 : 3; }

  const PressureLaw& law() const {
    if (!law_) throw DomainError("model: no pressure law (Burgers system)");
    return *law_;
  }

  // --- state accessors -----------------------------------------------------

  double hybrid_density(const Vec& W) const {
    return kind_ == ModelKind::BurgersFP ? 1.0 + W[0] : W[0];
  }
  double particle_density(const Vec& W) const {
    return kind_ == ModelKind::BurgersFP ? W[0] : W[1];
  }
  double carrier_density(const Vec& W) const {
    return kind_ == ModelKind::BurgersFP ? 1.0 : W[0] - W[1];
  }
  double momentum(const Vec& W) const { return W[dim() - 1]; }
  double velocity(const Vec& W) const {
    const double r = require_r(W);
    return momentum(W) / r;
  }

  /// (rho, u) for Burgers, (n, rho, u) for Euler.
  Vec to_primitive(const Vec& W) const {
    const double r = require_r(W);
    Vec P(dim());
    if (kind_ == ModelKind::BurgersFP) {
      P << W[0], W[1] / r;
    } else {
      P << W[0] - W[1], W[1], W[2] / r;
    }
    return P;
  }

  Vec from_primitive(const Vec& P) const {
    Vec W(dim());
    if (kind_ == ModelKind::BurgersFP) {
      const double r = 1.0 + P[0];
      W << P[0], r * P[1];
    } else {
      const double r = P[0] + P[1];
      W << r, P[1], r * P[2];
    }
    return W;
  }

  // --- flux, Jacobian, diffusion, entropy ----------------------------------

  Vec flux(const Vec& W) const {
    const double r = require_r(W);
    Vec F(dim());
    if (kind_ == ModelKind::BurgersFP) {
      const double rho = W[0], w = W[1];
      F << rho * w / r, w * w / r + theta_ * rho;
    } else {
      const double rho = W[1], w = W[2];
      const double n = W[0] - rho;
      F << w, rho * w / r, w * w / r + law_->value(std::max(n, 0.0)) + theta_ * rho;
    }
    return F;
  }

  Mat jacobian(const Vec& W) const {
    const double r = require_r(W);
    Mat A(dim(), dim());
    if (kind_ == ModelKind::BurgersFP) {
      const double rho = W[0];
      const double u = W[1] / r;
      A << u / r, rho / r,
           theta_ - u * u, 2.0 * u;
    } else {
      const double rho = W[1];
      const double u = W[2] / r;
      const double n = W[0] - rho;
      const double dp = law_->deriv(std::max(n, 0.0));
      A << 0.0, 0.0, 1.0,
           -rho * u / r, u, rho / r,
           dp - u * u, theta_ - dp, 2.0 * u;
    }
    return A;
  }

  /// D = D0 + theta * D1.
  std::pair<Mat, Mat> diffusion_split(const Vec& W) const {
    const double r = require_r(W);
    if (kind_ == ModelKind::BurgersFP) {
      const double rho = W[0];
      const double u = W[1] / r;
      Mat D0(2, 2), D1(2, 2);
      const double a = rho * u / (r * r * r);
      D0 << a * u, -a,
            0.0, 0.0;
      D1 << 1.0 / (r * r), 0.0,
            -rho * u / r, rho / r;
      return {D0, D1};
    }
    const double rho = W[1];
    const double u = W[2] / r;
    const double n = W[0] - rho;
    const double nu = n / r;
    const double dp = law_->deriv(std::max(n, 0.0));
    Mat D0 = Mat::Zero(3, 3), D1 = Mat::Zero(3, 3);
    D0(1, 0) = -nu * (1.0 - nu) * dp;
    D0(1, 1) = nu * (1.0 - nu) * dp;
    D1(1, 1) = nu * nu;
    D1(2, 0) = -(1.0 - nu) * u;
    D1(2, 2) = 1.0 - nu;
    return {D0, D1};
  }

  Mat diffusion(const Vec& W) const {
    auto [D0, D1] = diffusion_split(W);
    return D0 + theta_ * D1;
  }

  EntropyPack entropy_pack(const Vec& W) const {
    const double r = require_r(W);
    EntropyPack out;
    if (kind_ == ModelKind::BurgersFP) {
      const double rho = W[0], w = W[1];
      const double u = w / r;
      if (theta_ > 0.0 && !(rho > kDensityFloor))
        throw DomainError("entropy: rho too small for the log term");
      const double lr = theta_ > 0.0 ? std::log(rho) : 0.0;
      out.value = 0.5 * w * w / r + theta_ * rho * lr;
      out.gradient = Vec(2);
      out.gradient << -0.5 * u * u + theta_ * (1.0 + lr), u;
      out.hessian = Mat(2, 2);
      const double trho = theta_ > 0.0 ? theta_ / rho : 0.0;
      out.hessian << u * u / r + trho, -u / r,
                     -u / r, 1.0 / r;
    } else {
      const double rho = W[1], w = W[2];
      const double u = w / r;
      const double n = W[0] - rho;
      if (!(n > kDensityFloor)) throw DomainError("entropy: carrier density too small");
      if (theta_ > 0.0 && !(rho > kDensityFloor))
        throw DomainError("entropy: rho too small for the log term");
      const double lr = theta_ > 0.0 ? std::log(rho) : 0.0;
      const double Pi = law_->pi(n);
      const double Pip = law_->pi_prime(n);
      const double Pipp = law_->deriv(n) / n;  // Pi'' = p'/n
      out.value = 0.5 * w * w / r + Pi + theta_ * rho * lr;
      out.gradient = Vec(3);
      out.gradient << -0.5 * u * u + Pip, -Pip + theta_ * (1.0 + lr), u;
      out.hessian = Mat(3, 3);
      const double trho = theta_ > 0.0 ? theta_ / rho : 0.0;
      out.hessian << u * u / r + Pipp, -Pipp, -u / r,
                     -Pipp, Pipp + trho, 0.0,
                     -u / r, 0.0, 1.0 / r;
    }
    return out;
  }

  /// Closed-form eigenvalues of dF, ascending.
  Vec closed_form_eigenvalues(const Vec& W) const {
    const double r = require_r(W);
    if (kind_ == ModelKind::BurgersFP) {
      const double rho = W[0];
      const double u = W[1] / r;
      const double delta2 = 4.0 * rho * r;
      const double s = std::sqrt(u * u + theta_ * delta2);
      Vec lam(2);
      lam << u - (s - u) / (2.0 * r), u + (s + u) / (2.0 * r);
      if (lam[0] > lam[1]) std::swap(lam[0], lam[1]);
      return lam;
    }
    const double rho = W[1];
    const double u = W[2] / r;
    const double n = W[0] - rho;
    const double dp = law_->deriv(std::max(n, 0.0));
    const double d = std::sqrt(std::max(n * dp + theta_ * rho, 0.0) / r);
    Vec lam(3);
    lam << u - d, u, u + d;
    return lam;
  }

  double max_abs_eigenvalue(const Vec& W) const {
    const Vec lam = closed_form_eigenvalues(W);
    return lam.cwiseAbs().maxCoeff();
  }

  /// Basic state validity used by the evolution harness.
  bool state_valid(const Vec& W) const {
    if (!W.allFinite()) return false;
    if (kind_ == ModelKind::BurgersFP) return W[0] >= 0.0;
    return W[0] > 0.0 && W[1] >= 0.0 && W[0] - W[1] >= 0.0;
  }

 private:
  ModelDescriptor(ModelKind kind, double theta, std::optional<PressureLaw> law)
      : kind_(kind), theta_(theta), law_(std::move(law)) {}

  double require_r(const Vec& W) const {
    if (W.size() != dim()) throw DomainError("model: wrong state dimension");
    const double r = kind_ == ModelKind::BurgersFP ? 1.0 + W[0] : W[0];
    if (!(r > 0.0)) throw DomainError("model: singular state, hybrid density r <= 0");
    return r;
  }

  ModelKind kind_;
  double theta_;
  std::optional<PressureLaw> law_;
};

}  // namespace fpflow
