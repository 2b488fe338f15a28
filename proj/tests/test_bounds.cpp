#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mpspec/bounds.hpp"
#include "mpspec/coefficient.hpp"
#include "testutil.hpp"

using namespace mpspec;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("constants for the unit weight") {
  AprioriConstants k = compute_constants(Coefficient::builtin("one"));
  // safety folding keeps everything within a fraction of a percent
  CHECK(k.r_min == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(k.r_max == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(k.rp_pos_max == doctest::Approx(0.0));
  CHECK(k.c_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k.c_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k.a1 == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(k.a1 <= 1.0);  // conservative side
  CHECK(k.c1 == doctest::Approx(0.25).epsilon(1e-2));
  CHECK(k.Lambda1 == doctest::Approx(16.0).epsilon(1e-2));
  CHECK(k.Lambda2 == doctest::Approx(0.25).epsilon(1e-2));
  CHECK(k.c2 == doctest::Approx(3.0).epsilon(1e-2));
  CHECK(k.c3 == doctest::Approx(3.0).epsilon(1e-2));
  CHECK(k.Lambda3 == doctest::Approx(16.0).epsilon(1e-2));
  CHECK(k.c4 == doctest::Approx(6.0).epsilon(1e-2));
}

TEST_CASE("constants for r = 2 - cos(pi x / 2)") {
  Coefficient r = Coefficient::expression("2 - cos(pi*x/2)");
  AprioriConstants k = compute_constants(r);
  CHECK(k.r_min == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(k.r_max == doctest::Approx(2.0).epsilon(2e-3));
  // r' = (pi/2) sin(pi x/2) peaks at the endpoints
  CHECK(k.rp_pos_max == doctest::Approx(kPi / 2).epsilon(2e-3));
  CHECK(k.rp_neg_max == doctest::Approx(kPi / 2).epsilon(2e-3));
  CHECK(k.c_min == doctest::Approx(std::exp(-kPi)).epsilon(1e-2));
  // a1 = sqrt(r_min c_min / (r_max c_max)) = e^{-pi}/sqrt(2)
  CHECK(k.a1 == doctest::Approx(std::exp(-kPi) / std::sqrt(2.0)).epsilon(1e-2));
  CHECK(k.a1 == doctest::Approx(0.030557).epsilon(1e-2));
  CHECK(k.a1 <= std::exp(-kPi) / std::sqrt(2.0));  // safety acts downward
}

TEST_CASE("constants reject sign-changing weights") {
  CHECK_THROWS_AS(compute_constants(Coefficient::expression("x")), std::domain_error);
  CHECK_THROWS_AS(compute_constants(Coefficient::expression("0.2 - x^2")),
                  std::domain_error);
}

TEST_CASE("interior extrema are refined between grid points") {
  // minimum at x = 1/3 falls off any uniform grid; golden refinement finds it
  Coefficient r = Coefficient::expression("1 + (x - 1/3)^2");
  AprioriConstants k = compute_constants(r, 101);
  CHECK(k.r_min == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("energy envelope holds for the unit weight exactly") {
  EnvelopeReport rep = verify_energy_envelope(Coefficient::builtin("one"), 9.0, 0.7);
  CHECK(rep.min_ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
  // the bound is tight here; only interpolation noise can leak out
  CHECK(rep.max_violation <= 1e-9);
}

TEST_CASE("energy envelope holds for random weights") {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> L(1.0, 100.0), T(0.0, kPi);
  for (int trial = 0; trial < 12; ++trial) {
    Coefficient r = testutil::random_smooth_r(rng);
    double lam = L(rng), theta = T(rng);
    EnvelopeReport rep = verify_energy_envelope(r, lam, theta);
    CAPTURE(lam);
    CAPTURE(theta);
    CHECK(rep.max_violation <= 1e-10);
    // E(0) is in the sample set, so the ratio 1 is always attained
    CHECK(rep.min_ratio <= 1.0 + 1e-12);
    CHECK(rep.max_ratio >= 1.0 - 1e-12);
    CHECK(rep.min_ratio >= rep.c_min * (1.0 - 1e-10));
    CHECK(rep.max_ratio <= rep.c_max * (1.0 + 1e-10));
  }
}

TEST_CASE("boundary identities at constant-weight eigenpairs") {
  Coefficient one = Coefficient::builtin("one");
  for (int k = 1; k <= 4; ++k) {
    double lam = (k * kPi / 2) * (k * kPi / 2);
    double theta = (k % 2 == 1) ? kPi / 2 : 0.0;  // interior data of sin(k pi (x+1)/2)
    for (Family fam : {Family::energy, Family::slope}) {
      IdentityReport rep = verify_identities(one, lam, theta, fam);
      CAPTURE(k);
      CHECK(rep.boundary_mismatch < 1e-8);
      CHECK(rep.max_residual() < 1e-7);
    }
  }
}

TEST_CASE("interior identity holds away from eigenpairs") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> L(0.5, 40.0), T(0.05, kPi - 0.05);
  for (int trial = 0; trial < 8; ++trial) {
    Coefficient r = testutil::random_smooth_r(rng);
    double lam = L(rng), theta = T(rng);
    for (Family fam : {Family::energy, Family::slope}) {
      IdentityReport rep = verify_identities(r, lam, theta, fam);
      // the running-integral identity holds at every x regardless of theta
      CHECK(rep.lagrange_max < 1e-7);
    }
  }
  // generic data misses the boundary zeros, and the report says so
  IdentityReport off = verify_identities(Coefficient::builtin("one"), 3.7, 0.9);
  CHECK(off.boundary_mismatch > 0.01);
}

TEST_CASE("nonlinearity constants for a rational autonomous factor") {
  Coefficient g = Coefficient::product(Coefficient::builtin("one"),
                                       Coefficient::expression("(1+15*u^2)/(1+u^2)"));
  NonlinearConstants nc = nonlinear_constants(g, 1e3, 101, 401, {{1.0, 15.0}});
  CHECK(nc.g_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nc.g_max == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(nc.C1 == doctest::Approx(0.0));
  // |u gtilde'(u)| = 28u^2/(1+u^2)^2 has maximum 7 at |u| = 1
  CHECK(nc.C2 >= 6.8);
  CHECK(nc.C2 <= 7.001);
  CHECK(nc.Lambda_k(1) == doctest::Approx((3 * kPi / 2) * (3 * kPi / 2)).epsilon(1e-12));
  CHECK(nc.R(4.0) == doctest::Approx(2.0 * nc.C2).epsilon(1e-12));
  CHECK(nc.gamma_lower(4.0) ==
        doctest::Approx(std::sqrt(1.0 / 15.0) * std::exp(-nc.R(4.0))).epsilon(1e-12));
}

TEST_CASE("nonlinearity constants pick up x dependence") {
  Coefficient g = Coefficient::expression("(2 + sin(x)) * (1 + u^2/(1+u^2))");
  NonlinearConstants nc = nonlinear_constants(g);
  // d/dx = cos(x) (1 + u^2/(1+u^2)) <= 2 near x=0, u large
  CHECK(nc.C1 >= 1.9);
  CHECK(nc.C1 <= 2.001);
  CHECK(nc.g_min == doctest::Approx(2.0 - std::sin(1.0)).epsilon(1e-6));
  CHECK(nc.g_max == doctest::Approx(2.0 * (2.0 + std::sin(1.0))).epsilon(1e-3));
}
