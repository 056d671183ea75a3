#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fpflow/models.hpp"

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

Mat fd_jacobian_of(const std::function<Vec(const Vec&)>& f, const Vec& W) {
  const int m = static_cast<int>(W.size());
  const Vec f0 = f(W);
  Mat J(f0.size(), m);
  for (int j = 0; j < m; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(W[j]));
    Vec Wp = W, Wm = W;
    Wp[j] += h;
    Wm[j] -= h;
    J.col(j) = (f(Wp) - f(Wm)) / (2.0 * h);
  }
  return J;
}

}  // namespace

TEST_CASE("gamma-law pressure evaluation") {
  const PressureLaw law = PressureLaw::gamma_law(1.0, 2.0);
  auto e0 = law.eval(0.0);
  CHECK(e0.p == 0.0);
  CHECK(e0.dp == 0.0);
  CHECK(e0.d2p == 2.0);
  auto e1 = law.eval(1.5);
  CHECK(e1.p == Catch::Approx(2.25).margin(1e-15));
  CHECK(e1.dp == Catch::Approx(3.0).margin(1e-15));
  CHECK(e1.d2p == Catch::Approx(2.0).margin(1e-15));
  const PressureLaw law2 = PressureLaw::gamma_law(2.0, 3.0);
  auto e2 = law2.eval(2.0);
  CHECK(e2.p == Catch::Approx(16.0).margin(1e-12));
  CHECK(e2.dp == Catch::Approx(24.0).margin(1e-12));
  CHECK(e2.d2p == Catch::Approx(24.0).margin(1e-12));
  CHECK_THROWS_AS(law.eval(-0.1), DomainError);
  CHECK_THROWS_AS(PressureLaw::gamma_law(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(PressureLaw::gamma_law(-1.0, 2.0), DomainError);
}

TEST_CASE("pressure inverse") {
  const PressureLaw law = PressureLaw::gamma_law(1.0, 2.0);
  CHECK(law.inverse(4.0) == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(law.inverse(0.0) == 0.0);
  CHECK(law.inverse(1.0 + 3.0) == Catch::Approx(2.0).epsilon(1e-14));  // nbar at kappa = 3
  CHECK_THROWS_AS(law.inverse(-1.0), DomainError);
}

TEST_CASE("tabulated laws: validation and inverse") {
  auto wrap = [](double C, double g) {
    return PressureLaw::tabulated(
        [C, g](double n) { return C * std::pow(n, g); },
        [C, g](double n) { return C * g * std::pow(n, g - 1.0); },
        [C, g](double n) { return C * g * (g - 1.0) * std::pow(n, g - 2.0); });
  };
  const PressureLaw tab = wrap(1.3, 2.0);
  for (double y : {0.5, 4.0, 123.0})
    CHECK(std::abs(tab.value(tab.inverse(y)) - y) <= 1e-12 * std::max(1.0, y));
  // a concave "pressure" must be rejected at construction
  CHECK_THROWS_AS(PressureLaw::tabulated([](double n) { return std::sqrt(n); },
                                         [](double n) { return 0.5 / std::sqrt(n); },
                                         [](double n) { return -0.25 * std::pow(n, -1.5); }),
                  DomainError);
}

TEST_CASE("Pi and its derivatives") {
  const PressureLaw law = PressureLaw::gamma_law(0.8, 2.0);
  // Pi'' = p'/n on a sample grid
  for (double n : {0.2, 0.7, 1.0, 3.5, 9.0})
    CHECK(std::abs(law.pi_second(n) - law.deriv(n) / n) <= 1e-10);
  // closed form against quadrature through a tabulated wrapper
  for (double g : {2.0, 1.7}) {
    const PressureLaw exact = PressureLaw::gamma_law(1.1, g);
    const PressureLaw tab = PressureLaw::tabulated(
        [g](double n) { return 1.1 * std::pow(n, g); },
        [g](double n) { return 1.1 * g * std::pow(n, g - 1.0); },
        [g](double n) { return 1.1 * g * (g - 1.0) * std::pow(n, g - 2.0); });
    for (double n : {0.3, 1.0, 2.7}) {
      CHECK(tab.pi_prime(n) == Catch::Approx(exact.pi_prime(n)).epsilon(1e-9));
      CHECK(tab.pi(n) == Catch::Approx(exact.pi(n)).epsilon(1e-8));
    }
  }
}

TEST_CASE("flux evaluation") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  CHECK(bur.flux(vec2(0.0, 0.0)).isZero());
  const Vec Fb = bur.flux(vec2(1.0, 2.0));
  CHECK(Fb[0] == Catch::Approx(1.0).margin(1e-15));
  CHECK(Fb[1] == Catch::Approx(3.0).margin(1e-15));

  const ModelDescriptor eul = ModelDescriptor::euler(0.0, PressureLaw::gamma_law(1.0, 2.0));
  const Vec Fe = eul.flux(vec3(2.0, 1.0, 0.0));
  CHECK(Fe[0] == 0.0);
  CHECK(Fe[1] == 0.0);
  CHECK(Fe[2] == Catch::Approx(1.0).margin(1e-15));

  CHECK_THROWS_AS(bur.flux(vec2(-1.0, 0.0)), DomainError);  // r = 0
}

TEST_CASE("jacobian matches the displayed matrices and finite differences") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const Mat Ab = bur.jacobian(vec2(1.0, 0.0));
  CHECK(Ab(0, 0) == 0.0);
  CHECK(Ab(0, 1) == Catch::Approx(0.5));
  CHECK(Ab(1, 0) == Catch::Approx(1.0));
  CHECK(Ab(1, 1) == 0.0);

  const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, PressureLaw::gamma_law(1.0, 2.0));
  const Mat Ae = eul0.jacobian(vec3(2.0, 1.0, 0.0));
  Mat expect(3, 3);
  expect << 0, 0, 1, 0, 0, 0.5, 2, -2, 0;
  CHECK((Ae - expect).cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> urho(0.1, 10.0), uu(-5.0, 5.0);
  for (int it = 0; it < 50; ++it) {
    const Vec Wb = vec2(urho(rng), (1.0 + 0.0) * uu(rng));
    const Mat Jfd = fd_jacobian_of([&](const Vec& W) { return bur.flux(W); }, Wb);
    CHECK((bur.jacobian(Wb) - Jfd).cwiseAbs().maxCoeff() < 1e-6);
  }
  const ModelDescriptor eul = ModelDescriptor::euler(1.0, PressureLaw::gamma_law(1.0, 2.0));
  for (int it = 0; it < 50; ++it) {
    const double n = urho(rng), rho = urho(rng), u = uu(rng);
    const Vec We = vec3(n + rho, rho, (n + rho) * u);
    const Mat Jfd = fd_jacobian_of([&](const Vec& W) { return eul.flux(W); }, We);
    CHECK((eul.jacobian(We) - Jfd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("diffusion matrices") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const Mat Db = bur.diffusion(vec2(1.0, 0.0));
  Mat expect(2, 2);
  expect << 0.25, 0, 0, 0.5;
  CHECK((Db - expect).cwiseAbs().maxCoeff() < 1e-15);

  const ModelDescriptor eul = ModelDescriptor::euler(1.0, PressureLaw::gamma_law(1.0, 2.0));
  const auto [D0, D1] = eul.diffusion_split(vec3(2.0, 1.0, 0.0));
  CHECK(D0(1, 0) == Catch::Approx(-0.5));
  CHECK(D0(1, 1) == Catch::Approx(0.5));
  CHECK(D0.row(0).isZero());
  CHECK(D0.row(2).isZero());
  CHECK(D1(1, 1) == Catch::Approx(0.25));
  CHECK(D1(2, 2) == Catch::Approx(0.5));

  const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, PressureLaw::gamma_law(1.0, 2.0));
  const Mat De = eul0.diffusion(vec3(2.0, 1.0, -1.0));
  CHECK(De.row(0).isZero());  // first equation undiffused
  CHECK(De.row(2).isZero());  // theta = 0 kills the momentum row too
}

TEST_CASE("entropy pack") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const EntropyPack eb = bur.entropy_pack(vec2(1.0, 0.0));
  CHECK(eb.value == Catch::Approx(0.0).margin(1e-15));
  CHECK(eb.gradient[0] == Catch::Approx(1.0));
  CHECK(eb.gradient[1] == 0.0);
  Mat expect(2, 2);
  expect << 1.0, 0, 0, 0.5;
  CHECK((eb.hessian - expect).cwiseAbs().maxCoeff() < 1e-15);

  const ModelDescriptor eul = ModelDescriptor::euler(1.0, PressureLaw::gamma_law(1.0, 2.0));
  const EntropyPack ee = eul.entropy_pack(vec3(2.0, 1.0, 0.0));
  Mat he(3, 3);
  he << 2, -2, 0, -2, 3, 0, 0, 0, 0.5;
  CHECK((ee.hessian - he).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(bur.entropy_pack(vec2(0.0, 0.0)), DomainError);  // log singularity

  // hessian equals the finite-difference jacobian of the gradient
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  for (int it = 0; it < 30; ++it) {
    const Vec Wb = vec2(ur(rng), (1.0 + 0.0) * uu(rng));
    const Mat Hfd = fd_jacobian_of([&](const Vec& W) { return bur.entropy_pack(W).gradient; }, Wb);
    CHECK((bur.entropy_pack(Wb).hessian - Hfd).cwiseAbs().maxCoeff() < 1e-6);
    const double n = ur(rng), rho = ur(rng), u = uu(rng);
    const Vec We = vec3(n + rho, rho, (n + rho) * u);
    const Mat Hfe = fd_jacobian_of([&](const Vec& W) { return eul.entropy_pack(W).gradient; }, We);
    CHECK((eul.entropy_pack(We).hessian - Hfe).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("primitive conversion round trip") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const Vec Pb = bur.to_primitive(vec2(1.0, 2.0));
  CHECK(Pb[0] == 1.0);
  CHECK(Pb[1] == Catch::Approx(1.0));
  const ModelDescriptor eul = ModelDescriptor::euler(1.0, PressureLaw::gamma_law(1.0, 2.0));
  const Vec Pe = eul.to_primitive(vec3(2.0, 1.0, -3.0));
  CHECK(Pe[0] == 1.0);
  CHECK(Pe[1] == 1.0);
  CHECK(Pe[2] == Catch::Approx(-1.5));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  double worst = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const Vec We = vec3(ur(rng) + ur(rng), 0.0, 0.0);
    Vec W(3);
    const double n = ur(rng), rho = ur(rng), u = uu(rng);
    W << n + rho, rho, (n + rho) * u;
    const Vec back = eul.from_primitive(eul.to_primitive(W));
    worst = std::max(worst, (back - W).cwiseAbs().maxCoeff() / (1.0 + W.cwiseAbs().maxCoeff()));
    Vec Wb = vec2(rho, (1.0 + rho) * u);
    const Vec backb = bur.from_primitive(bur.to_primitive(Wb));
    worst = std::max(worst, (backb - Wb).cwiseAbs().maxCoeff() / (1.0 + Wb.cwiseAbs().maxCoeff()));
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("Euler system is Galilean invariant, Burgers is not") {
  const ModelDescriptor eul = ModelDescriptor::euler(1.0, PressureLaw::gamma_law(1.0, 2.0));
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  for (int it = 0; it < 100; ++it) {
    const double n = ur(rng), rho = ur(rng), u = uu(rng), u0 = uu(rng);
    const double r = n + rho;
    const Vec lam0 = eul.closed_form_eigenvalues(vec3(r, rho, r * u));
    const Vec lam1 = eul.closed_form_eigenvalues(vec3(r, rho, r * (u + u0)));
    CHECK((lam1 - lam0 - Vec::Constant(3, u0)).cwiseAbs().maxCoeff() < 1e-10);
  }
  // witness that the Burgers eigenvalues do not shift by u0
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const Vec a = bur.closed_form_eigenvalues(vec2(1.0, 0.0));
  const Vec b = bur.closed_form_eigenvalues(vec2(1.0, 2.0 * 1.0));  // u = 1 = u0
  CHECK(std::abs((b - a - Vec::Constant(2, 1.0)).cwiseAbs().maxCoeff()) > 1e-3);
}

TEST_CASE("entropy hessian symmetrizes the flux jacobian") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  const ModelDescriptor bur = ModelDescriptor::burgers(0.7);
  const ModelDescriptor eul = ModelDescriptor::euler(0.7, PressureLaw::gamma_law(1.0, 2.0));
  for (int it = 0; it < 100; ++it) {
    const Vec Wb = vec2(ur(rng), (1.0) * uu(rng));
    const Mat XA = bur.entropy_pack(Wb).hessian * bur.jacobian(Wb);
    CHECK((XA - XA.transpose()).norm() < 1e-10 * (1.0 + XA.norm()));
    const double n = ur(rng), rho = ur(rng), u = uu(rng);
    const Vec We = vec3(n + rho, rho, (n + rho) * u);
    const Mat XAe = eul.entropy_pack(We).hessian * eul.jacobian(We);
    CHECK((XAe - XAe.transpose()).norm() < 1e-10 * (1.0 + XAe.norm()));
  }
}

TEST_CASE("entropy-variable map is locally invertible where the hessian is definite") {
  const ModelDescriptor eul = ModelDescriptor::euler(0.5, PressureLaw::gamma_law(1.0, 2.0));
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> ur(0.1, 10.0), uu(-5.0, 5.0);
  for (int it = 0; it < 50; ++it) {
    const double n = ur(rng), rho = ur(rng), u = uu(rng);
    const Mat H = eul.entropy_pack(vec3(n + rho, rho, (n + rho) * u)).hessian;
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    REQUIRE(lo > 0.0);                 // positive definite at interior states
    CHECK(hi / lo < 1e12);             // bounded condition number = locally invertible map
  }
}
