#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fpflow/spectral.hpp"

using namespace fpflow;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Vec burgers_state(double rho, double u) { return vec2(rho, (1.0 + rho) * u); }

Vec euler_state(double n, double rho, double u) { return vec3(n + rho, rho, (n + rho) * u); }

const PressureLaw kLaw = PressureLaw::gamma_law(1.0, 2.0);

}  // namespace

TEST_CASE("eigenstructure closed forms and flags") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  {
    const SpectralReport rep = eigenstructure(bur, burgers_state(1.0, 0.0));
    REQUIRE(rep.strictly_hyperbolic);
    CHECK(rep.eigenvalues[0] == Catch::Approx(-std::sqrt(0.5)).margin(1e-12));
    CHECK(rep.eigenvalues[1] == Catch::Approx(std::sqrt(0.5)).margin(1e-12));
  }
  {
    const SpectralReport rep = eigenstructure(bur, burgers_state(0.0, 1.0));
    REQUIRE(rep.strictly_hyperbolic);
    CHECK(rep.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.eigenvalues[1] == Catch::Approx(2.0).margin(1e-12));
  }
  {
    const SpectralReport rep = eigenstructure(bur, burgers_state(0.0, 0.0));
    CHECK_FALSE(rep.strictly_hyperbolic);
    CHECK_FALSE(rep.degenerate_fields.empty());
  }
  const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, kLaw);
  {
    const SpectralReport rep = eigenstructure(eul0, euler_state(1.0, 1.0, 0.0));
    REQUIRE(rep.strictly_hyperbolic);
    CHECK(rep.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(rep.eigenvalues[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.eigenvalues[2] == Catch::Approx(1.0).margin(1e-12));
  }
  {
    const SpectralReport rep = eigenstructure(eul0, euler_state(1.0, 1.0, 2.0));
    CHECK(rep.eigenvalues[0] == Catch::Approx(1.0).margin(1e-10));
    CHECK(rep.eigenvalues[1] == Catch::Approx(2.0).margin(1e-10));
    CHECK(rep.eigenvalues[2] == Catch::Approx(3.0).margin(1e-10));
  }
}

TEST_CASE("eigenvector residuals and biorthogonality") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const ModelDescriptor eul = ModelDescriptor::euler(0.5, kLaw);
  for (int it = 0; it < 50; ++it) {
    for (const auto* model : {&bur, &eul}) {
      const Vec W = model->dim() == 2 ? burgers_state(ur(rng), uu(rng))
                                      : euler_state(ur(rng), ur(rng), uu(rng));
      const SpectralReport rep = eigenstructure(*model, W);
      REQUIRE(rep.strictly_hyperbolic);
      const Mat A = model->jacobian(W);
      for (int k = 0; k < model->dim(); ++k) {
        const Vec r = rep.right_vectors.col(k);
        CHECK((A * r - rep.eigenvalues[k] * r).norm() <=
              1e-8 * (1.0 + std::abs(rep.eigenvalues[k])));
        for (int j = 0; j < model->dim(); ++j) {
          const double dot = rep.left_vectors.row(k) * rep.right_vectors.col(j);
          CHECK(std::abs(dot - (k == j ? 1.0 : 0.0)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("closed-form eigenvalues match the generic solver on random states") {
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  const double thetas[] = {0.1, 1.0, 10.0};
  for (int it = 0; it < 200; ++it) {
    const double th = thetas[it % 3];
    const ModelDescriptor bur = ModelDescriptor::burgers(th);
    const ModelDescriptor eul = ModelDescriptor::euler(th, kLaw);
    const Vec Wb = burgers_state(ur(rng), uu(rng));
    const SpectralReport rb = eigenstructure(bur, Wb);
    const Vec cb = bur.closed_form_eigenvalues(Wb);
    CHECK((rb.eigenvalues - cb).cwiseAbs().maxCoeff() <=
          1e-10 * (1.0 + cb.cwiseAbs().maxCoeff()));
    const Vec We = euler_state(ur(rng), ur(rng), uu(rng));
    const SpectralReport re = eigenstructure(eul, We);
    const Vec ce = eul.closed_form_eigenvalues(We);
    CHECK((re.eigenvalues - ce).cwiseAbs().maxCoeff() <=
          1e-10 * (1.0 + ce.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("field classification") {
  const ModelDescriptor eul = ModelDescriptor::euler(1.0, kLaw);
  const Vec W = euler_state(1.0, 1.0, 0.0);
  const auto fields = genuine_nonlinearity(eul, W);
  REQUIRE(fields.size() == 3);
  CHECK(fields[1].type == FieldType::LinearlyDegenerate);
  CHECK(std::abs(fields[1].gn_value) < 1e-7);
  // closed form (n^2 p'' + 2 n p' + 2 theta rho) / (2 d r^2)
  const double d = std::sqrt(1.5);
  const double expect = (2.0 + 4.0 + 2.0) / (2.0 * d * 4.0);
  CHECK(fields[2].gn_value == Catch::Approx(expect).epsilon(1e-6));
  CHECK(fields[2].type == FieldType::GenuinelyNonlinear);
  CHECK(fields[0].type == FieldType::GenuinelyNonlinear);

  // interior Euler states keep the middle field linearly degenerate
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ur(0.2, 5.0), uu(-2.0, 2.0);
  for (int it = 0; it < 10; ++it) {
    const auto f = genuine_nonlinearity(eul, euler_state(ur(rng), ur(rng), uu(rng)));
    CHECK(f[1].type == FieldType::LinearlyDegenerate);
  }

  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const auto fb = genuine_nonlinearity(bur, burgers_state(1.0, 0.0));
  CHECK(fb[0].gn_value < 0.0);
  CHECK(fb[1].gn_value > 0.0);

  CHECK_THROWS_AS(genuine_nonlinearity(bur, burgers_state(0.0, 0.0)), DomainError);
}

TEST_CASE("directional derivatives are frame invariant") {
  // grad(lambda) . r in conservative variables equals grad(mu) . s in
  // primitive variables with s = dG^{-1} r
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> ur(0.2, 5.0), uu(-3.0, 3.0);
  const ModelDescriptor bur = ModelDescriptor::burgers(0.8);
  const ModelDescriptor eul = ModelDescriptor::euler(0.8, kLaw);
  for (int it = 0; it < 100; ++it) {
    const bool burgers = it % 2 == 0;
    const ModelDescriptor& model = burgers ? bur : eul;
    const int m = model.dim();
    Vec P(m);
    if (burgers)
      P << ur(rng), uu(rng);
    else
      P << ur(rng), ur(rng), uu(rng);
    const Vec W = model.from_primitive(P);
    const SpectralReport rep = eigenstructure(model, W);
    if (!rep.strictly_hyperbolic) continue;

    Mat dG(m, m);  // jacobian of the primitive -> conservative map
    if (burgers) {
      const double u = P[1];
      dG << 1, 0, u, 1 + P[0];
    } else {
      const double u = P[2], r = P[0] + P[1];
      dG << 1, 1, 0, 0, 1, 0, u, u, r;
    }
    for (int k = 0; k < m; ++k) {
      const Vec r = rep.right_vectors.col(k);
      const Vec s = dG.lu().solve(r);
      Vec grad(m), gradW(m);
      for (int j = 0; j < m; ++j) {
        const double hp = 1e-6 * (1.0 + std::abs(P[j]));
        Vec Pp = P, Pm = P;
        Pp[j] += hp;
        Pm[j] -= hp;
        const Vec lp = detail::real_sorted_eigenvalues(model.jacobian(model.from_primitive(Pp)));
        const Vec lm = detail::real_sorted_eigenvalues(model.jacobian(model.from_primitive(Pm)));
        grad[j] = (lp[k] - lm[k]) / (2.0 * hp);

        const double hw = 1e-6 * (1.0 + std::abs(W[j]));
        Vec Wp = W, Wm = W;
        Wp[j] += hw;
        Wm[j] -= hw;
        const Vec lpw = detail::real_sorted_eigenvalues(model.jacobian(Wp));
        const Vec lmw = detail::real_sorted_eigenvalues(model.jacobian(Wm));
        gradW[j] = (lpw[k] - lmw[k]) / (2.0 * hw);
      }
      CHECK(std::abs(grad.dot(s) - gradW.dot(r)) < 1e-6 * (1.0 + std::abs(gradW.dot(r))));
    }
  }
}

TEST_CASE("symmetrizer report") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  {
    const SymmetrizerReport rep = symmetrizer_report(bur, burgers_state(1.0, 0.0));
    CHECK(rep.xa_defect <= 1e-12);
    CHECK(rep.xd_defect <= 1e-12);
    CHECK(rep.xd_sym_min_eig > 0.0);
  }
  {
    // det(XD) = det X det D = (1/6)(2/27) = 1/81 at rho = 2, u = 0
    const Vec W = burgers_state(2.0, 0.0);
    const Mat X = bur.entropy_pack(W).hessian;
    const Mat D = bur.diffusion(W);
    CHECK(X.determinant() == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(D.determinant() == Catch::Approx(2.0 / 27.0).epsilon(1e-12));
    CHECK((X * D).determinant() == Catch::Approx(1.0 / 81.0).epsilon(1e-12));
  }
  {
    const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, kLaw);
    const SymmetrizerReport rep = symmetrizer_report(eul0, euler_state(1.0, 1.0, 0.5));
    CHECK(rep.xd_defect <= 1e-12);
    CHECK(std::abs(rep.xd_sym_min_eig) <= 1e-12);  // positive semidefinite only
  }
}

TEST_CASE("XD definiteness and rank across temperatures") {
  std::mt19937 rng(808);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  auto sym_rank = [](const Mat& M) {
    const Mat S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 1e-12 * std::max(top, 1.0)) ++rank;
    return rank;
  };
  for (double th : {0.1, 1.0, 10.0}) {
    const ModelDescriptor bur = ModelDescriptor::burgers(th);
    const ModelDescriptor eul = ModelDescriptor::euler(th, kLaw);
    for (int it = 0; it < 30; ++it) {
      const Vec Wb = burgers_state(ur(rng), uu(rng));
      const SymmetrizerReport rb = symmetrizer_report(bur, Wb);
      CHECK(rb.xd_sym_min_eig > 0.0);
      const Vec We = euler_state(ur(rng), ur(rng), uu(rng));
      const Mat XD = eul.entropy_pack(We).hessian * eul.diffusion(We);
      CHECK(sym_rank(XD) == 2);
    }
  }
  const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, kLaw);
  for (int it = 0; it < 30; ++it) {
    const Vec We = euler_state(ur(rng), ur(rng), uu(rng));
    const Mat XD = eul0.entropy_pack(We).hessian * eul0.diffusion(We);
    CHECK(sym_rank(XD) == 1);
  }
}

TEST_CASE("Kawashima-Shizuta condition") {
  const ModelDescriptor eul = ModelDescriptor::euler(1.0, kLaw);
  {
    const KawashimaShizutaReport rep = kawashima_shizuta(eul, euler_state(1.0, 1.0, 0.3));
    CHECK(rep.pass);
    CHECK(rep.dr_norms.minCoeff() > 0.0);
  }
  const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, kLaw);
  {
    const Vec W = euler_state(1.0, 1.0, 0.0);
    const KawashimaShizutaReport rep = kawashima_shizuta(eul0, W);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.field_ok[1]);  // middle field sits in ker D
    CHECK(rep.dr_norms[1] <= 1e-12 * eul0.diffusion(W).norm());
    CHECK(rep.field_ok[0]);
    CHECK(rep.field_ok[2]);
    // second component of D r(+-) with the closed-form scaling r = (1, 1-nu, lambda)
    const double nu = 0.5, dp = 2.0;
    const double lam = std::sqrt(1.0 * dp / 2.0);
    Vec r(3);
    r << 1.0, 1.0 - nu, lam;
    const Vec Dr = eul0.diffusion(W) * r;
    CHECK(std::abs(Dr[1]) == Catch::Approx(nu * nu * (1.0 - nu) * dp).epsilon(1e-12));
  }
}

TEST_CASE("uniform-stability scan") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const double delta = majda_pego_scan(bur, burgers_state(1.0, 0.0), 50.0, 200);
  CHECK(delta > 0.0);
  // D = 0 is only neutrally stable
  const Mat A = bur.jacobian(burgers_state(1.0, 0.0));
  const double d0 = majda_pego_delta(A, Mat::Zero(2, 2), 50.0, 200);
  CHECK(std::abs(d0) <= 1e-12);
}

TEST_CASE("parabolicity window of the Burgers diffusion matrix") {
  {
    const DsymInterval iv = dsym_interval_burgers(1.0, 2.0);  // Lambda = 2 sqrt(2) > 2
    REQUIRE(iv.theta_upper.has_value());
    CHECK(iv.theta_lower == Catch::Approx(0.1464466).margin(1e-7));
    CHECK(*iv.theta_upper == Catch::Approx(0.8535534).margin(1e-7));
  }
  {
    const DsymInterval iv = dsym_interval_burgers(1.0, 1.0);  // Lambda = sqrt(2) <= 2
    CHECK_FALSE(iv.theta_upper.has_value());
    CHECK(iv.theta_lower == Catch::Approx(0.1035534).margin(1e-7));
  }
  {
    const DsymInterval iv = dsym_interval_burgers(3.7, 0.0);  // Lambda = 0
    CHECK(iv.theta_lower == 0.0);
    CHECK_FALSE(iv.theta_upper.has_value());
  }
}

TEST_CASE("transversality quantities for the Euler system") {
  const Vec W = euler_state(1.0, 1.0, 0.0);
  {
    const PegoQuantities pq = pego_quantities_euler(W, kLaw, 0.0);
    CHECK_FALSE(pq.re_det_m_max.has_value());
    // nu^2 (1-nu) p'^2 = 0.25 * 0.5 * 4
    CHECK(pq.l_D_r == Catch::Approx(0.5).epsilon(1e-12));
  }
  {
    const PegoQuantities pq = pego_quantities_euler(W, kLaw, 1.0);
    CHECK(pq.l_D_r == Catch::Approx(0.875).epsilon(1e-12));
    REQUIRE(pq.re_det_m_max.has_value());
    CHECK(*pq.re_det_m_max < 0.0);
  }
  {
    // the comoving reduction makes the quantities velocity independent
    const PegoQuantities pq = pego_quantities_euler(euler_state(1.0, 1.0, 3.7), kLaw, 1.0);
    CHECK(pq.l_D_r == Catch::Approx(0.875).epsilon(1e-12));
  }
}
