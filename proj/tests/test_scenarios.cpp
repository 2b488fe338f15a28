#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mpspec/characteristic.hpp"
#include "mpspec/oracle.hpp"
#include "mpspec/scenarios.hpp"

using namespace mpspec;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool any_note_contains(const std::vector<std::string>& notes, const std::string& needle) {
  for (const auto& n : notes)
    if (n.find(needle) != std::string::npos) return true;
  return false;
}

Problem gap_instance(double delta, double smoothing) {
  Problem p;
  p.spec.r = CoefficientSpec{"piecewise", "", {-delta, delta}, {4.0, 1.0, 4.0}, smoothing};
  double a = std::sqrt(3.0) / 2.0;
  p.spec.bc_minus = MultiPointCondition{-1, {a}, {0.0}};
  p.spec.bc_plus = MultiPointCondition{+1, {a}, {0.0}};
  p.r = Coefficient::from_spec(p.spec.r);
  return p;
}

}  // namespace

TEST_CASE("quarter-width plateau: no coupled eigenvalues in the window") {
  GapReport rep = run_example1(0.25);
  CHECK(rep.interval.first == doctest::Approx(kPi * kPi).epsilon(1e-12));
  CHECK(rep.interval.second == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-12));
  CHECK(rep.scanned.first == doctest::Approx(kPi * kPi + 0.5));
  CHECK(rep.scanned.second == doctest::Approx(9.0 * kPi * kPi - 0.5));
  CHECK(rep.eigenvalues_found.empty());
  CHECK(rep.gap_certified);

  // the energy chain caps phi0(1)^2 at 5/8, so the coupled margin is at
  // least sqrt(3)/2 - sqrt(5/8)
  CHECK(rep.min_coupled_margin > std::sqrt(3.0) / 2.0 - std::sqrt(0.625) - 1e-6);

  // the decoupled eigenvalues are the odd half-interval Dirichlet modes;
  // for the exact weight they solve 1.5 s + atan2(sin(s/4), cos(s/4)/2) = m pi
  REQUIRE(rep.decoupled_roots.size() == 4);
  for (double lam : rep.decoupled_roots) {
    double s = std::sqrt(lam);
    double phase = 1.5 * s + std::atan2(std::sin(0.25 * s), 0.5 * std::cos(0.25 * s));
    CHECK(std::fabs(std::sin(phase)) < 1e-6);
  }

  REQUIRE(rep.scan_samples.size() >= 100);

  CHECK(rep.energy_chain_ok);
  CHECK(rep.max_chain_bound <= 0.625 + 1e-7);
  CHECK(rep.max_end_sq < 0.75);
  CHECK(any_note_contains(rep.notes, "energy chain"));
  CHECK(any_note_contains(rep.notes, "0 coupled eigenvalues"));
  CHECK(any_note_contains(rep.notes, "vacuously"));
}

TEST_CASE("smoothing the jumps keeps the coupled window empty") {
  GapReport rep = run_example1(0.25, 0.02);
  CHECK(rep.smoothing == doctest::Approx(0.02));
  CHECK(rep.eigenvalues_found.empty());
  CHECK(rep.gap_certified);
  CHECK(rep.decoupled_roots.size() >= 3);
  // the replayed chain runs on the exact instance regardless of smoothing
  CHECK(rep.energy_chain_ok);
}

TEST_CASE("narrower plateau stretches the certified window") {
  GapReport rep = run_example1(0.1);
  CHECK(rep.interval.first == doctest::Approx(std::pow(kPi / 0.4, 2)).epsilon(1e-12));
  CHECK(rep.interval.second == doctest::Approx(std::pow(3.0 * kPi / 0.4, 2)).epsilon(1e-12));
  CHECK(rep.interval.second > 5.0 * rep.interval.first);
  CHECK(rep.eigenvalues_found.empty());
  CHECK(rep.gap_certified);
}

TEST_CASE("oracle agrees: window eigenvalues are exactly the decoupled ones") {
  GapReport rep = run_example1(0.25);
  Problem p = gap_instance(0.25, 0.0);
  OracleResult orc = oracle_spectrum(p, 800, 25);
  REQUIRE(orc.eigenvalues.size() >= 12);
  double lo = kPi * kPi, hi = 9.0 * kPi * kPi;
  int below = 0, above = 0;
  std::vector<double> inside;
  for (double lam : orc.eigenvalues) {
    if (lam < lo - 1.0) ++below;
    else if (lam > hi + 1.0) ++above;
    else if (lam > lo + 1.0 && lam < hi - 1.0) inside.push_back(lam);
  }
  CHECK(below >= 1);
  CHECK(above >= 1);
  REQUIRE(inside.size() == rep.decoupled_roots.size());
  for (size_t i = 0; i < inside.size(); ++i)
    CHECK(inside[i] == doctest::Approx(rep.decoupled_roots[i]).epsilon(2e-3));
}

TEST_CASE("parameter validation for the gap scenario") {
  CHECK_THROWS_AS(run_example1(0.0), std::invalid_argument);
  CHECK_THROWS_AS(run_example1(0.5), std::invalid_argument);
  CHECK_THROWS_AS(run_example1(0.25, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(run_example1(0.45, 0.6), std::invalid_argument);
}

TEST_CASE("scan csv export round-trips the samples") {
  GapReport rep = run_example1(0.25);
  std::string path = "scen_scan.csv";
  write_scan_csv(rep, path);
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string header;
  std::getline(is, header);
  CHECK(header == "lambda,determinant");
  size_t rows = 0;
  double first_lam = 0.0, first_det = 0.0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (rows == 0) {
      std::istringstream ls(line);
      char comma;
      ls >> first_lam >> comma >> first_det;
    }
    ++rows;
  }
  CHECK(rows == rep.scan_samples.size());
  CHECK(first_lam == doctest::Approx(rep.scan_samples[0].first).epsilon(1e-15));
  CHECK(first_det == doctest::Approx(rep.scan_samples[0].second).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("double eigenvalue construction certifies all parts") {
  DoubleEigenReport rep = run_example2();

  // pinned reference values for the shooting quantities
  CHECK(rep.mu_D == doctest::Approx(7.417383671158341).epsilon(1e-10));
  CHECK(rep.alpha == doctest::Approx(-0.817373417681757).epsilon(1e-8));

  CHECK(rep.alpha_bound_ok);
  CHECK(std::fabs(rep.alpha) < 1.0);
  // the energy comparison is sharp in the sense that the ratio exceeds 1
  CHECK(rep.energy_ratio > 1.0);
  CHECK(rep.energy_ratio < 2.0);

  CHECK(rep.jacobian_det < 1e-8);
  CHECK(rep.oracle_multiplicity == 2);
  CHECK(rep.gram_det > 0.9);
  CHECK(rep.odd_bc_residual_max < 1e-9);

  // mode geometry: v is even with v(1) = alpha, w vanishes at 0 and +-1
  CHECK(rep.even_mode.value(0.0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.even_mode.value(1.0, 0) == doctest::Approx(rep.alpha).epsilon(1e-12));
  CHECK(rep.even_mode.value(-1.0, 0) == doctest::Approx(rep.alpha).epsilon(1e-9));
  CHECK(std::fabs(rep.odd_mode.value(0.0, 0)) < 1e-12);
  CHECK(std::fabs(rep.odd_mode.value(1.0, 0)) / rep.odd_mode.sup_abs(0) < 1e-9);

  CHECK(any_note_contains(rep.notes, "admissible"));
  CHECK(any_note_contains(rep.notes, "gram"));
  CHECK(any_note_contains(rep.notes, "oracle cluster"));
}

TEST_CASE("the double point is an even-order root of the determinant") {
  DoubleEigenReport rep = run_example2();
  Problem p;
  p.spec.r = CoefficientSpec{"expression", "2-cos(pi*x/2)", {}, {}, 0.0};
  p.spec.bc_minus = MultiPointCondition{-1, {rep.alpha}, {0.0}};
  p.spec.bc_plus = MultiPointCondition{+1, {rep.alpha}, {0.0}};
  p.r = Coefficient::expression("2-cos(pi*x/2)");

  double at = characteristic_determinant(p, rep.mu_D);
  double left = characteristic_determinant(p, rep.mu_D - 0.05);
  double right = characteristic_determinant(p, rep.mu_D + 0.05);
  CHECK(std::fabs(at) < 1e-8);
  CHECK(left * right > 0.0);  // no sign change through the root
  CHECK(std::fabs(left) > 1e3 * std::fabs(at));
}
