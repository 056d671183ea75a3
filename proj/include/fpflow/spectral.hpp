#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "fpflow/models.hpp"

namespace fpflow {

struct SpectralReport {
  Vec eigenvalues;                     // ascending
  Mat right_vectors;                   // columns, unit norm, sign-fixed
  Mat left_vectors;                    // rows, l_i . r_j = delta_ij
  Vec gn_indicators;                   // grad(lambda_k) . r_k, paper-scaled vectors
  bool strictly_hyperbolic = false;
  std::vector<int> degenerate_fields;  // indices taking part in near-collisions
};

enum class FieldType { GenuinelyNonlinear, LinearlyDegenerate, NearDegenerate };

struct FieldClassification {
  double gn_value = 0.0;
  FieldType type = FieldType::GenuinelyNonlinear;
};

struct SymmetrizerReport {
  double xa_defect = 0.0;       // ||XA - (XA)^T||
  double xd_defect = 0.0;       // ||XD - (XD)^T||
  double xd_sym_min_eig = 0.0;  // min eigenvalue of (XD + XD^T)/2
};

struct KawashimaShizutaReport {
  Vec dr_norms;                 // |D r_k| per field
  std::vector<bool> field_ok;   // eigenvector escapes ker D
  bool pass = false;
};

struct DsymInterval {
  double theta_lower = 0.0;
  std::optional<double> theta_upper;  // absent when the interval is unbounded
};

struct PegoQuantities {
  double l_D_r = 0.0;
  std::optional<double> re_det_m_max;  // absent when theta = 0
};

namespace detail {

/// Eigenvalues of a real matrix sorted ascending by real part; throws if the
/// spectrum has a meaningful imaginary part.
inline Vec real_sorted_eigenvalues(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  const CVec ev = es.eigenvalues();
  const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
  std::vector<double> vals(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i].imag()) > 1e-9 * scale)
      throw NumericError("eigenstructure: complex eigenvalues of the flux Jacobian");
    vals[i] = ev[i].real();
  }
  std::sort(vals.begin(), vals.end());
  return Eigen::Map<Vec>(vals.data(), vals.size());
}

/// Rescale a vector so that its first component of magnitude > 1e-12 is +1
/// (matches the eigenvector normalization used in the closed-form field
/// classification displays).
inline Vec first_component_scaled(const Vec& v) {
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-12) return v / v[i];
  return v;
}

}  // namespace detail

/// Eigenvalues and eigenvectors of dF(W); closed forms cross-checked against
/// the generic dense solver.
inline SpectralReport eigenstructure(const ModelDescriptor& model, const Vec& W) {
  const int m = model.dim();
  const Mat A = model.jacobian(W);
  const Vec lam_closed = model.closed_form_eigenvalues(W);

  Eigen::EigenSolver<Mat> es(A);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  const CVec ev = es.eigenvalues();
  const CMat evec = es.eigenvectors();

  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return ev[a].real() < ev[b].real(); });

  SpectralReport rep;
  rep.eigenvalues = Vec(m);
  rep.right_vectors = Mat(m, m);
  const double specrad = std::max(lam_closed.cwiseAbs().maxCoeff(), ev.cwiseAbs().maxCoeff());
  const double gap_tol = 1e-10 * (1.0 + specrad);

  for (int k = 0; k < m; ++k) {
    rep.eigenvalues[k] = ev[order[k]].real();
    Vec v = evec.col(order[k]).real();
    const double vn = v.norm();
    if (vn > 0) v /= vn;
    // sign convention: first component of magnitude > 1e-12 positive
    for (int i = 0; i < m; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0) v = -v;
        break;
      }
    }
    rep.right_vectors.col(k) = v;
  }

  rep.strictly_hyperbolic = true;
  for (int k = 0; k + 1 < m; ++k) {
    if (rep.eigenvalues[k + 1] - rep.eigenvalues[k] <= gap_tol) {
      rep.strictly_hyperbolic = false;
      rep.degenerate_fields.push_back(k);
      rep.degenerate_fields.push_back(k + 1);
    }
  }
  std::sort(rep.degenerate_fields.begin(), rep.degenerate_fields.end());
  rep.degenerate_fields.erase(
      std::unique(rep.degenerate_fields.begin(), rep.degenerate_fields.end()),
      rep.degenerate_fields.end());

  if (rep.strictly_hyperbolic) {
    for (int k = 0; k < m; ++k) {
      const double ref = std::max(1.0, std::abs(lam_closed[k]));
      if (std::abs(rep.eigenvalues[k] - lam_closed[k]) > 1e-10 * ref)
        throw NumericError("eigenstructure: closed-form / solver eigenvalue mismatch");
    }
    rep.left_vectors = rep.right_vectors.inverse();  // rows satisfy l_i . r_j = delta_ij
  } else {
    rep.left_vectors = Mat::Zero(m, m);
    Eigen::FullPivLU<Mat> lu(rep.right_vectors);
    if (lu.isInvertible()) rep.left_vectors = lu.inverse();
  }

  rep.gn_indicators = Vec::Constant(m, std::numeric_limits<double>::quiet_NaN());
  if (rep.strictly_hyperbolic) {
    for (int k = 0; k < m; ++k) {
      // gradient of lambda_k by central differences with nearest-value matching
      Vec grad(m);
      double h_scale = 1.0;
      for (int attempt = 0;; ++attempt) {
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
          const double h = h_scale * 1e-6 * (1.0 + std::abs(W[j]));
          Vec Wp = W, Wm = W;
          Wp[j] += h;
          Wm[j] -= h;
          const Vec lp = detail::real_sorted_eigenvalues(model.jacobian(Wp));
          const Vec lm = detail::real_sorted_eigenvalues(model.jacobian(Wm));
          // nearest-value continuation from the base eigenvalue
          int ip = 0, im = 0;
          for (int i = 1; i < m; ++i) {
            if (std::abs(lp[i] - rep.eigenvalues[k]) < std::abs(lp[ip] - rep.eigenvalues[k])) ip = i;
            if (std::abs(lm[i] - rep.eigenvalues[k]) < std::abs(lm[im] - rep.eigenvalues[k])) im = i;
          }
          // crossing inside the stencil: the matched values hug a different field
          if (std::abs(lp[ip] - rep.eigenvalues[k]) > 0.45 * (rep.eigenvalues[std::min(k + 1, m - 1)] -
                                                              rep.eigenvalues[std::max(k - 1, 0)]) +
                                                         gap_tol)
            ok = false;
          grad[j] = (lp[ip] - lm[im]) / (2.0 * h);
        }
        if (ok) break;
        h_scale *= 0.1;
        if (attempt >= 2) throw NumericError("genuine_nonlinearity: eigenvalue crossing in stencil");
      }
      rep.gn_indicators[k] = grad.dot(detail::first_component_scaled(rep.right_vectors.col(k)));
    }
  }
  return rep;
}

/// Per-field grad(lambda) . r with the classification used in the field
/// structure statements. Requires strict hyperbolicity.
inline std::vector<FieldClassification> genuine_nonlinearity(const ModelDescriptor& model,
                                                             const Vec& W) {
  const SpectralReport rep = eigenstructure(model, W);
  if (!rep.strictly_hyperbolic)
    throw DomainError("genuine_nonlinearity: state is not strictly hyperbolic");
  const double scale = 1.0 + rep.eigenvalues.cwiseAbs().maxCoeff();
  std::vector<FieldClassification> out(model.dim());
  for (int k = 0; k < model.dim(); ++k) {
    out[k].gn_value = rep.gn_indicators[k];
    const double a = std::abs(out[k].gn_value);
    if (a <= 1e-8 * scale)
      out[k].type = FieldType::LinearlyDegenerate;
    else if (a <= 1e-5 * scale)
      out[k].type = FieldType::NearDegenerate;
    else
      out[k].type = FieldType::GenuinelyNonlinear;
  }
  return out;
}

/// X = d^2 zeta as a symmetrizer: symmetry defects of XA and XD and the
/// smallest eigenvalue of the symmetric part of XD.
inline SymmetrizerReport symmetrizer_report(const ModelDescriptor& model, const Vec& W) {
  const Mat X = model.entropy_pack(W).hessian;
  const Mat A = model.jacobian(W);
  const Mat D = model.diffusion(W);
  const Mat XA = X * A;
  const Mat XD = X * D;
  SymmetrizerReport rep;
  rep.xa_defect = (XA - XA.transpose()).norm();
  rep.xd_defect = (XD - XD.transpose()).norm();
  const Mat S = 0.5 * (XD + XD.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.info() != Eigen::Success) throw NumericError("symmetrizer_report: eigensolver failed");
  rep.xd_sym_min_eig = es.eigenvalues().minCoeff();
  return rep;
}

/// |D r_k| per field; a field fails when its eigenvector sits in ker D.
inline KawashimaShizutaReport kawashima_shizuta(const ModelDescriptor& model, const Vec& W) {
  const SpectralReport rep = eigenstructure(model, W);
  const Mat D = model.diffusion(W);
  const double dnorm = D.norm();
  KawashimaShizutaReport out;
  out.dr_norms = Vec(model.dim());
  out.field_ok.resize(model.dim());
  out.pass = true;
  for (int k = 0; k < model.dim(); ++k) {
    out.dr_norms[k] = (D * rep.right_vectors.col(k)).norm();
    out.field_ok[k] = out.dr_norms[k] > 1e-12 * std::max(dnorm, 1e-300);
    if (!out.field_ok[k]) out.pass = false;
  }
  return out;
}

/// delta such that Re lambda(-P(xi)) <= -delta xi^2 over a log-spaced grid
/// xi in [1e-3, xi_max], where P(xi) = i xi A + xi^2 D.
inline double majda_pego_delta(const Mat& A, const Mat& D, double xi_max, int n_xi) {
  if (!(xi_max > 0.0) || n_xi < 2) throw DomainError("majda_pego: bad grid");
  const int m = static_cast<int>(A.rows());
  double delta = kInf;
  const double lo = std::log(1e-3), hi = std::log(xi_max);
  for (int i = 0; i < n_xi; ++i) {
    const double xi = std::exp(lo + (hi - lo) * i / (n_xi - 1.0));
    CMat P = std::complex<double>(0.0, xi) * A.cast<std::complex<double>>() +
             (xi * xi) * D.cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<CMat> es(-P, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("majda_pego: complex eigensolver failed");
    double re_max = -kInf;
    for (int k = 0; k < m; ++k) re_max = std::max(re_max, es.eigenvalues()[k].real());
    delta = std::min(delta, -re_max / (xi * xi));
  }
  return delta;
}

inline double majda_pego_scan(const ModelDescriptor& model, const Vec& W, double xi_max,
                              int n_xi) {
  return majda_pego_delta(model.jacobian(W), model.diffusion(W), xi_max, n_xi);
}

/// Temperature window on which the symmetric part of the Burgers diffusion
/// matrix is positive definite: (theta1, theta2) when Lambda = |u| sqrt(rho r)
/// exceeds 2, (theta1, +inf) otherwise.
inline DsymInterval dsym_interval_burgers(double rho, double u) {
  if (!(rho > 0.0)) throw DomainError("dsym_interval: rho must be positive");
  const double r = 1.0 + rho;
  const double Lambda = std::sqrt(rho * r * u * u);
  DsymInterval out;
  out.theta_lower = Lambda / (r * r * (Lambda + 2.0));
  if (Lambda > 2.0) out.theta_upper = Lambda / (r * r * (Lambda - 2.0));

  // confirm by a direct definiteness test just inside/outside each endpoint
  auto pd_at = [&](double th) {
    const ModelDescriptor mdl = ModelDescriptor::burgers(th);
    Vec W(2);
    W << rho, (1.0 + rho) * u;
    const Mat D = mdl.diffusion(W);
    const Mat S = 0.5 * (D + D.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    return es.eigenvalues().minCoeff() > 0.0;
  };
  if (out.theta_lower > 0.0) {
    if (!pd_at(out.theta_lower * 1.001) || pd_at(out.theta_lower * 0.999))
      throw NumericError("dsym_interval: lower endpoint failed the definiteness check");
  }
  if (out.theta_upper) {
    if (!pd_at(*out.theta_upper * 0.999) || pd_at(*out.theta_upper * 1.001))
      throw NumericError("dsym_interval: upper endpoint failed the definiteness check");
  }
  return out;
}

/// Transversality quantities for the Euler system at a state: l+ D r+ with the
/// closed-form eigenvector scaling r+ = (1, 1-nu, lambda+), l+ = (p', -p'+theta,
/// lambda+), and (for theta > 0) the maximum over a xi grid of Re det M of the
/// reduced 2x2 symbol. Works in the comoving frame internally.
inline PegoQuantities pego_quantities_euler(const Vec& W, const PressureLaw& law, double theta,
                                            double xi_max = 50.0, int n_xi = 201) {
  const double r = W[0], rho = W[1];
  const double n = r - rho;
  if (!(n > kDensityFloor) || !(rho > kDensityFloor))
    throw DomainError("pego_quantities: need positive n and rho");
  const double nu = n / r;
  const double dp = law.deriv(n);
  const double lam = std::sqrt((n * dp + theta * rho) / r);  // lambda+ at u = 0

  const ModelDescriptor mdl = ModelDescriptor::euler(theta, law);
  Vec W0(3);
  W0 << r, rho, 0.0;  // Galilean shift to the comoving frame
  const Mat D = mdl.diffusion(W0);
  Vec rp(3), lp(3);
  rp << 1.0, 1.0 - nu, lam;
  lp << dp, -dp + theta, lam;

  PegoQuantities out;
  out.l_D_r = lp.dot(D * rp);
  if (theta > 0.0) {
    double remax = -kInf;
    for (int i = 0; i < n_xi; ++i) {
      const double xi = -xi_max + 2.0 * xi_max * i / (n_xi - 1.0);
      const std::complex<double> I(0.0, 1.0);
      const std::complex<double> m11 = I * xi * (1.0 - nu) * lam - nu * (1.0 - nu) * dp;
      const std::complex<double> m12 = -I * xi * lam + nu * (1.0 - nu) * dp + theta * nu * nu;
      const std::complex<double> m21 =
          I * xi * (1.0 - nu) * (dp - theta) + theta * lam * (1.0 - nu);
      const std::complex<double> m22 = -I * xi * (dp - theta);
      remax = std::max(remax, (m11 * m22 - m12 * m21).real());
    }
    out.re_det_m_max = remax;
  }
  return out;
}

/// Aggregate stability diagnostics at a state (used by the report command).
struct StabilityReport {
  SpectralReport spectral;
  SymmetrizerReport symmetrizer;
  KawashimaShizutaReport ks;
  double majda_pego_delta = 0.0;
  std::optional<DsymInterval> dsym;     // Burgers only
  std::optional<PegoQuantities> pego;   // Euler only
};

inline StabilityReport stability_report(const ModelDescriptor& model, const Vec& W,
                                        double xi_max = 50.0, int n_xi = 200) {
  StabilityReport rep;
  rep.spectral = eigenstructure(model, W);
  rep.symmetrizer = symmetrizer_report(model, W);
  rep.ks = kawashima_shizuta(model, W);
  rep.majda_pego_delta = majda_pego_scan(model, W, xi_max, n_xi);
  if (model.kind() == ModelKind::BurgersFP) {
    if (W[0] > 0.0) rep.dsym = dsym_interval_burgers(W[0], W[1] / (1.0 + W[0]));
  } else {
    rep.pego = pego_quantities_euler(W, model.law(), model.theta());
  }
  return rep;
}

}  // namespace fpflow
