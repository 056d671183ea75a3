#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fpflow/hugoniot.hpp"
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

const PressureLaw kLaw = PressureLaw::gamma_law(1.0, 2.0);

double rh_norm(const ModelDescriptor& m, const Vec& Wstar, const Vec& W, double c) {
  return rh_residual(m, Wstar, W, c).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("jump residual") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const Vec Wstar = vec2(1.0, 0.0);
  CHECK(rh_norm(bur, Wstar, Wstar, 0.37) == 0.0);
  const Vec W = vec2(3.0, 4.0 * 1.0);  // rho = 3, u = 1
  CHECK(rh_norm(bur, Wstar, W, 1.5) <= 1e-14);
  const Vec res = rh_residual(bur, Wstar, W, 1.0);
  CHECK(res[0] == Catch::Approx(1.0));  // [[rho u]] - c [[rho]] = 3 - 2
}

TEST_CASE("Burgers jump closed forms") {
  const Vec Wstar = vec2(1.0, 0.0);
  {
    const JumpState js = burgers_jump(Wstar, 1.0, +1, 3.0);
    CHECK(js.state[1] / 4.0 == Catch::Approx(1.0).margin(1e-12));  // u = +1
    CHECK(js.c == Catch::Approx(1.5).margin(1e-12));
  }
  {
    const JumpState js = burgers_jump(Wstar, 1.0, -1, 3.0);
    CHECK(js.state[1] / 4.0 == Catch::Approx(-1.0).margin(1e-12));
    CHECK(js.c == Catch::Approx(-1.5).margin(1e-12));
  }
  // branch speed limits: characteristic value at rho*, reference velocity at 0
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  const Vec lam = bur.closed_form_eigenvalues(Wstar);
  CHECK(burgers_jump(Wstar, 1.0, +1, 1.0).c == Catch::Approx(lam[1]).margin(1e-12));
  CHECK(burgers_jump(Wstar, 1.0, -1, 1.0).c == Catch::Approx(lam[0]).margin(1e-12));
  CHECK(std::abs(burgers_jump(Wstar, 1.0, +1, 1e-9).c - 0.0) < 1e-8);
  CHECK(std::abs(burgers_jump(Wstar, 1.0, -1, 1e-9).c - 0.0) < 1e-8);
}

TEST_CASE("Burgers branch satisfies the jump conditions and the speed signs") {
  const ModelDescriptor bur = ModelDescriptor::burgers(1.0);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ur(0.2, 4.0), uu(-2.0, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    const double rho_s = ur(rng), u_s = uu(rng);
    const Vec Wstar = vec2(rho_s, (1.0 + rho_s) * u_s);
    const double scale = 1.0 + bur.flux(Wstar).cwiseAbs().maxCoeff();
    for (int sign : {+1, -1}) {
      const HugoniotBranch br = burgers_branch(Wstar, 1.0, sign, 0.05, 8.0, 41);
      REQUIRE(br.samples.size() == 41);
      for (const auto& s : br.samples)
        CHECK(rh_norm(bur, Wstar, s.state, s.c) <= 1e-10 * scale);
      const LiuReport liu = liu_check(br);
      CHECK(liu.speed_monotone);
      CHECK(liu.speed_trend == sign);  // c+ increases in rho, c- decreases
      for (const auto& s : br.samples) {
        if (std::abs(s.param - rho_s) < 1e-12) continue;
        const bool expect = sign > 0 ? s.param < rho_s : s.param > rho_s;
        CHECK(s.liu_ok == expect);
      }
    }
  }
}

TEST_CASE("Euler jump closed forms") {
  // comoving construction: u* = -sqrt(1.5), far state at the equilibrium
  // density gives a standing jump
  const double nx = 0.5 * (std::sqrt(13.0) - 1.0);
  const Vec Wstar = vec3(2.0, 1.0, 2.0 * (-std::sqrt(1.5)));
  {
    const JumpState js = euler_jump(Wstar, kLaw, 0.0, +1, nx);
    CHECK(js.c == Catch::Approx(0.0).margin(1e-12));
    const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, kLaw);
    CHECK(rh_norm(eul0, Wstar, js.state, js.c) <= 1e-12);
    // the ratio rho/n is preserved along the branch
    CHECK(js.state[1] == Catch::Approx(nx * 1.0 / 1.0).epsilon(1e-14));
  }
  // n -> n* limit reproduces the characteristic speeds
  for (double th : {0.0, 1.0}) {
    const ModelDescriptor eul = ModelDescriptor::euler(th, kLaw);
    const Vec lam = eul.closed_form_eigenvalues(Wstar);
    CHECK(euler_jump(Wstar, kLaw, th, +1, 1.0).c == Catch::Approx(lam[2]).margin(1e-10));
    CHECK(euler_jump(Wstar, kLaw, th, -1, 1.0).c == Catch::Approx(lam[0]).margin(1e-10));
    CHECK(euler_jump(Wstar, kLaw, th, +1, 1.0 + 1e-10).c == Catch::Approx(lam[2]).margin(1e-8));
  }
}

TEST_CASE("Euler branch residuals, ratio identity and slope convexity") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> ur(0.3, 3.0), uu(-2.0, 2.0);
  for (double th : {0.0, 1.0}) {
    const ModelDescriptor eul = ModelDescriptor::euler(th, kLaw);
    for (int rep = 0; rep < 6; ++rep) {
      const double n_s = ur(rng), rho_s = ur(rng), u_s = uu(rng);
      const Vec Wstar = vec3(n_s + rho_s, rho_s, (n_s + rho_s) * u_s);
      const double scale = 1.0 + eul.flux(Wstar).cwiseAbs().maxCoeff();
      for (int sign : {+1, -1}) {
        const HugoniotBranch br = euler_branch(Wstar, kLaw, th, sign, 0.3 * n_s, 3.0 * n_s, 31);
        REQUIRE(br.samples.size() == 31);
        for (const auto& s : br.samples) {
          CHECK(rh_norm(eul, Wstar, s.state, s.c) <= 1e-10 * scale);
          // n rho* = n* rho exactly by construction
          const double n = s.state[0] - s.state[1];
          CHECK(n * rho_s == Catch::Approx(n_s * s.state[1]).epsilon(1e-14));
        }
        CHECK(liu_check(br).speed_monotone);
      }
    }
  }
  // [[p]]/[[n]] strictly increasing in n (strict convexity of the pressure)
  const double n_s = 1.0;
  double prev = -kInf;
  for (double n : {0.3, 0.7, 0.999, 1.001, 1.8, 2.9}) {
    const double slope = std::abs(n - n_s) < 1e-12 ? kLaw.deriv(n_s)
                                                   : (kLaw.value(n) - kLaw.value(n_s)) / (n - n_s);
    CHECK(slope > prev);
    prev = slope;
  }
}

TEST_CASE("contact jumps move with the reference velocity") {
  // [[u]] = 0 with a nonzero density jump forces c = u*
  const double theta = 1.0;
  const ModelDescriptor eul = ModelDescriptor::euler(theta, kLaw);
  const double n_s = 2.0, rho_s = 1.0, u_s = 0.7;
  const Vec Wstar = vec3(n_s + rho_s, rho_s, (n_s + rho_s) * u_s);
  // pick rho, then n from continuity of p + theta rho
  const double rho = rho_s + 1.0;
  const double n = kLaw.inverse(kLaw.value(n_s) + theta * rho_s - theta * rho);
  const Vec W = vec3(n + rho, rho, (n + rho) * u_s);
  CHECK(rh_norm(eul, Wstar, W, u_s) <= 1e-12);
  CHECK(rh_norm(eul, Wstar, W, u_s + 0.1) > 1e-3);  // any other speed is inconsistent

  // theta = 0 contact: only the particle density jumps
  const ModelDescriptor eul0 = ModelDescriptor::euler(0.0, kLaw);
  const Vec W0 = vec3(n_s + rho, rho, (n_s + rho) * u_s);
  CHECK(rh_norm(eul0, Wstar, W0, u_s) <= 1e-12);
}

TEST_CASE("branch sampling control") {
  const Vec Wstar = vec2(1.0, 0.0);
  CHECK_THROWS_AS(burgers_branch(Wstar, 1.0, +1, -0.1, 2.0, 11), DomainError);
  CHECK_THROWS_AS(burgers_branch(Wstar, 1.0, +1, 2.0, 1.0, 11), DomainError);
  const HugoniotBranch br = burgers_branch(Wstar, 1.0, +1, 0.5, 2.0, 11);
  // the reference parameter is snapped onto the grid
  bool has_star = false;
  for (const auto& s : br.samples) has_star = has_star || s.param == 1.0;
  CHECK(has_star);
  CHECK_THROWS_AS(liu_check(HugoniotBranch{}), DomainError);
}
