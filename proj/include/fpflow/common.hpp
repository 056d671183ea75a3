#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Invalid inputs or states outside an operation's domain (log/1-over
/// singularities, nonpositive densities, parameters out of range).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A solver failed: root finder did not converge, eigensolver broke down,
/// time step underflowed.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The requested object is mathematically inadmissible (not a solver
/// failure): positivity would be violated, the jump lies on the wrong side
/// of the entropy criterion, and so on.
struct AdmissibilityError : std::runtime_error {
  explicit AdmissibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroAmplitudeError : AdmissibilityError {
  explicit ZeroAmplitudeError(const std::string& msg) : AdmissibilityError(msg) {}
};

struct ConnectionNotFoundError : AdmissibilityError {
  explicit ConnectionNotFoundError(const std::string& msg) : AdmissibilityError(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kDensityFloor = 1e-12;  // rho/n below this are treated as vanished
inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {
inline double sqr(double x) { return x * x; }
}  // namespace detail

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
/// Returns w such that f^(m)(x0) ~= sum_i w[i] f(xs[i]).
inline std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size());
  if (n < m + 1) throw DomainError("fd_weights: need at least m+1 nodes");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

/// Distance from point p to the segment [a, b].
inline double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                     const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace fpflow
