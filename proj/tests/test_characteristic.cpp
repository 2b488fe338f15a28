#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mpspec/characteristic.hpp"
#include "mpspec/ivp.hpp"
#include "mpspec/problem.hpp"
#include "testutil.hpp"

using namespace mpspec;

namespace {
const double kPi = 3.14159265358979323846;

Problem dirichlet_unit() {
  return parse_problem(R"json({
    "r": {"kind": "builtin", "body": "one"},
    "bc_minus": {"alphas": [], "etas": []},
    "bc_plus": {"alphas": [], "etas": []}
  })json");
}

Problem half_alpha_unit() {
  return parse_problem(R"json({
    "r": {"kind": "builtin", "body": "one"},
    "bc_minus": {"alphas": [0.5], "etas": [0.0]},
    "bc_plus": {"alphas": [0.5], "etas": [0.0]}
  })json");
}
}  // namespace

TEST_CASE("gamma vanishes on both sides at a baseline eigenpair") {
  Problem p = dirichlet_unit();
  double lam = (kPi / 2) * (kPi / 2);
  VariationalTrajectory vt = integrate_variational(p.r, lam, kPi / 2, Family::energy);
  GammaValue gm = gamma_side(p, vt, -1);
  GammaValue gp = gamma_side(p, vt, +1);
  CHECK(std::fabs(gm.value) < 1e-9);
  CHECK(std::fabs(gp.value) < 1e-9);
  CHECK(gm.side == -1);
  CHECK(gp.side == +1);
}

TEST_CASE("gamma hits the closed-form zero cos(pi/3) = 1/2") {
  // even solution cos((pi/3) x) satisfies u(1) = 0.5 u(0)
  Problem p = half_alpha_unit();
  double lam = (kPi / 3) * (kPi / 3);
  VariationalTrajectory vt = integrate_variational(p.r, lam, kPi / 2, Family::energy);
  CHECK(std::fabs(gamma_side(p, vt, +1).value) < 1e-9);
  CHECK(std::fabs(gamma_side(p, vt, -1).value) < 1e-9);
}

TEST_CASE("d_theta at a Dirichlet pair recovers the boundary identity") {
  Problem p = dirichlet_unit();
  double lam = (kPi / 2) * (kPi / 2);
  VariationalTrajectory vt = integrate_variational(p.r, lam, kPi / 2, Family::energy);
  GammaValue gp = gamma(vt, p.mp_plus());
  // w'(1) w_theta(1) = sqrt(lambda r(0)); with alpha = 0, d_theta = w_theta(1)
  CHECK(vt.wp(1.0) * gp.d_theta == doctest::Approx(kPi / 2).epsilon(1e-7));
}

TEST_CASE("gamma derivatives match finite differences") {
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> L(2.0, 25.0), T(0.2, 2.9);
  for (int trial = 0; trial < 3; ++trial) {
    Coefficient r = testutil::random_smooth_r(rng);
    MultiPointCondition bm = testutil::random_mp(rng, -1, 0.4);
    MultiPointCondition bp = testutil::random_mp(rng, +1, 0.4);
    double lam = L(rng), theta = T(rng);
    for (Family fam : {Family::energy, Family::slope}) {
      VariationalTrajectory vt = integrate_variational(r, lam, theta, fam, 1e-12);
      for (const MultiPointCondition& bc : {bm, bp}) {
        GammaValue g = gamma(vt, bc);
        double h = 1e-5;
        double ic[6];
        auto value_at = [&](double la, double th) {
          family_init(r, la, th, fam, ic);
          Trajectory t = integrate_two_sided(r, la, {ic[0], ic[1]}, 1e-12);
          double v = t.value(bc.side > 0 ? 1.0 : -1.0, 0);
          for (std::size_t i = 0; i < bc.alphas.size(); ++i)
            v -= bc.alphas[i] * t.value(bc.etas[i], 0);
          return v;
        };
        double fd_th = (value_at(lam, theta + h) - value_at(lam, theta - h)) / (2 * h);
        double fd_la = (value_at(lam + h, theta) - value_at(lam - h, theta)) / (2 * h);
        CHECK(g.d_theta == doctest::Approx(fd_th).epsilon(1e-5).scale(1.0));
        CHECK(g.d_lambda == doctest::Approx(fd_la).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_CASE("jacobian at the first baseline eigenpair: nondegenerate, signed") {
  Problem p = dirichlet_unit();
  double lam = (kPi / 2) * (kPi / 2);
  JacobianValue j = jacobian(p, lam, kPi / 2, Family::energy);
  CHECK(std::fabs(j.det) > 1e-3);
  CHECK(j.normalized() > 1e-2);
  // minus side carries sign -1, plus side +1
  CHECK(-j.entries[0][0] * j.entries[0][1] > 0.0);
  CHECK(+j.entries[1][0] * j.entries[1][1] > 0.0);
  CHECK(j.det == doctest::Approx(j.entries[0][0] * j.entries[1][1] -
                                 j.entries[0][1] * j.entries[1][0]));
}

TEST_CASE("signed product stays positive along the baseline spectrum") {
  Problem p = dirichlet_unit();
  for (int k = 3; k <= 6; ++k) {
    double lam = (k * kPi / 2) * (k * kPi / 2);  // exceeds Lambda3 = 16 from k = 3
    double theta = (k % 2 == 1) ? kPi / 2 : 0.0;
    JacobianValue j = jacobian(p, lam, theta, Family::energy);
    CAPTURE(k);
    CHECK(-j.entries[0][0] * j.entries[0][1] > 0.0);
    CHECK(+j.entries[1][0] * j.entries[1][1] > 0.0);
  }
}

TEST_CASE("determinant reduces to sin(2 sqrt(lambda))/sqrt(lambda) for the baseline") {
  Problem p = dirichlet_unit();
  for (double lam : {0.5, 2.0, 7.0, 19.0}) {
    double rt = std::sqrt(lam);
    CHECK(characteristic_determinant(p, lam) ==
          doctest::Approx(std::sin(2 * rt) / rt).epsilon(1e-9));
  }
  // smooth through zero and into the negative axis
  CHECK(characteristic_determinant(p, 0.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(characteristic_determinant(p, -4.0) ==
        doctest::Approx(std::sinh(4.0) / 2.0).epsilon(1e-9));
  for (int k = 1; k <= 4; ++k) {
    double lam = (k * kPi / 2) * (k * kPi / 2);
    CHECK(std::fabs(characteristic_determinant(p, lam)) < 1e-9);
  }
}

TEST_CASE("determinant brackets the shifted first eigenvalue") {
  Problem p = half_alpha_unit();
  double d_lo = characteristic_determinant(p, 1.0);
  double d_hi = characteristic_determinant(p, 1.2);
  CHECK(d_lo * d_hi < 0.0);  // root at (pi/3)^2 = 1.0966
  double lam1 = (kPi / 3) * (kPi / 3);
  CHECK(std::fabs(characteristic_determinant(p, lam1)) < 1e-9);
  // same zero seen by the pair (Gamma-, Gamma+) at the even-solution phase
  VariationalTrajectory vt = integrate_variational(p.r, lam1, kPi / 2, Family::energy);
  CHECK(std::fabs(gamma_side(p, vt, -1).value) < 1e-8);
  CHECK(std::fabs(gamma_side(p, vt, +1).value) < 1e-8);
}

TEST_CASE("determinant honors a separated minus endpoint") {
  // u(-1) = 0, u(1) = 0: same zero set as the baseline
  Problem p = parse_problem(R"json({
    "r": {"kind": "builtin", "body": "one"},
    "bc_minus": {"c0": 1.0, "c1": 0.0},
    "bc_plus": {"alphas": [], "etas": []}
  })json");
  double lam = (kPi / 2) * (kPi / 2);
  CHECK(std::fabs(characteristic_determinant(p, lam)) < 1e-9);
  CHECK(characteristic_determinant(p, 1.0) * characteristic_determinant(p, 3.0) < 0.0);
}

TEST_CASE("rotation identity for the slope family") {
  std::mt19937 rng(9090);
  std::uniform_real_distribution<double> L(1.0, 20.0);
  for (int trial = 0; trial < 4; ++trial) {
    Coefficient r = testutil::random_smooth_r(rng);
    MultiPointCondition bc = testutil::random_mp(rng, trial % 2 ? -1 : +1, 0.6);
    double lam = L(rng);
    VariationalTrajectory v0 = integrate_variational(r, lam, 0.0, Family::slope, 1e-12);
    VariationalTrajectory v1 =
        integrate_variational(r, lam, kPi / 2, Family::slope, 1e-12);
    double g0 = gamma(v0, bc).value;
    double g1 = gamma(v1, bc).value;
    for (double theta : {0.4, 1.2, 2.1, 2.9}) {
      VariationalTrajectory vt =
          integrate_variational(r, lam, theta, Family::slope, 1e-12);
      double expect = std::cos(theta) * g0 + std::sin(theta) * g1;
      CHECK(gamma(vt, bc).value == doctest::Approx(expect).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("single condition function: closed form zero and slope") {
  Coefficient one = Coefficient::builtin("one");
  MultiPointCondition empty;
  empty.side = +1;
  double lam = (kPi / 2) * (kPi / 2);
  // Gamma(theta) = sin(sqrt(lambda) + theta) = cos(theta): zero at pi/2
  CHECK(gamma_single(one, lam, 0.0, 1.0, empty) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gamma_single(one, lam, kPi / 2, 1.0, empty) ==
        doctest::Approx(0.0).epsilon(1e-9));
  auto zs = theta_zeros(one, lam, 1.0, empty);
  REQUIRE(zs.size() == 1);
  CHECK(zs[0].theta == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(zs[0].d_theta == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("small alpha instances keep exactly one zero with nonzero slope") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> L(1.0, 16.0), E(-0.9, 0.9);
  for (int trial = 0; trial < 10; ++trial) {
    Coefficient r = testutil::random_smooth_r(rng);
    double a1 = 0.15;  // well under the smallness threshold of these weights
    MultiPointCondition mpc = testutil::random_mp(rng, +1, a1 / 2);
    double lam = L(rng), eta0 = trial % 3 == 0 ? E(rng) : 1.0;
    auto zs = theta_zeros(r, lam, eta0, mpc);
    CAPTURE(trial);
    CAPTURE(lam);
    REQUIRE(zs.size() == 1);
    CHECK(std::fabs(zs[0].d_theta) > 1e-4);
  }
}

TEST_CASE("a crafted resonant combination defeats zero counting") {
  // alpha = (-1, sqrt(3)) at eta = (1/3, 2/3) against sin((pi/2)x + theta)
  // cancels both quadrature components: Gamma is identically zero and the
  // scan sees only integration noise. Uniqueness is not claimed out here.
  Coefficient one = Coefficient::builtin("one");
  MultiPointCondition mpc;
  mpc.side = +1;
  mpc.alphas = {-1.0, std::sqrt(3.0)};
  mpc.etas = {1.0 / 3.0, 2.0 / 3.0};
  double lam = (kPi / 2) * (kPi / 2);
  for (double theta : {0.3, 1.0, 2.2})
    CHECK(std::fabs(gamma_single(one, lam, theta, 1.0, mpc, 1e-12)) < 1e-9);
  auto zs = theta_zeros(one, lam, 1.0, mpc);
  CHECK(zs.size() >= 1);
  for (const auto& z : zs) CHECK(std::fabs(z.d_theta) < 1e-6);
}
