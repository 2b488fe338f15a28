#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "mpspec/coefficient.hpp"
#include "mpspec/problem.hpp"

using namespace mpspec;

TEST_CASE("expression coefficient evaluates value and derivative") {
  Coefficient r = Coefficient::expression("2 - cos(pi*x/2)");
  CHECK(r.value(0.0) == doctest::Approx(1.0));
  CHECK(r.value(1.0) == doctest::Approx(2.0));
  CHECK(r.derivative(0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.derivative(1.0) == doctest::Approx(1.5707963267948966));
  CHECK_FALSE(r.depends_on_u());
  CHECK(r.breakpoints().empty());
}

TEST_CASE("piecewise coefficient: exact steps and smoothed blend") {
  // step profile 4 / 1 / 4 with breaks at +-0.25
  Coefficient exact = Coefficient::piecewise({-0.25, 0.25}, {4.0, 1.0, 4.0}, 0.0);
  CHECK(exact.value(-0.5) == doctest::Approx(4.0));
  CHECK(exact.value(0.0) == doctest::Approx(1.0));
  CHECK(exact.value(0.5) == doctest::Approx(4.0));
  CHECK(exact.derivative(0.1) == doctest::Approx(0.0));
  CHECK(exact.breakpoints().size() == 2);

  double eps = 0.02;
  Coefficient sm = Coefficient::piecewise({-0.25, 0.25}, {4.0, 1.0, 4.0}, eps);
  // outside the windows identical to the step
  CHECK(sm.value(-0.30) == doctest::Approx(4.0));
  CHECK(sm.value(0.0) == doctest::Approx(1.0));
  // midpoint of the blend window sits at the average
  CHECK(sm.value(0.25) == doctest::Approx(2.5));
  // C1 at the window edges: derivative -> 0
  CHECK(sm.derivative(0.25 - eps) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sm.derivative(0.25 + eps) == doctest::Approx(0.0).epsilon(1e-12));
  // monotone through the window, derivative peaks at the center
  double dmid = sm.derivative(0.25);
  CHECK(dmid == doctest::Approx(1.5 * (4.0 - 1.0) / (2 * eps)));
  // derivative consistent with finite differences inside the window
  for (double x : {0.24, 0.25, 0.26}) {
    double h = 1e-7;
    double fd = (sm.value(x + h) - sm.value(x - h)) / (2 * h);
    CHECK(sm.derivative(x) == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK(sm.breakpoints().size() == 4);  // two windows, two edges each

  CHECK_THROWS_AS(Coefficient::piecewise({0.25, -0.25}, {4.0, 1.0, 4.0}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Coefficient::piecewise({-0.25, 0.25}, {4.0, 1.0}, 0.0),
                  std::invalid_argument);
  // overlapping smoothing windows
  CHECK_THROWS_AS(Coefficient::piecewise({-0.01, 0.01}, {4.0, 1.0, 4.0}, 0.05),
                  std::invalid_argument);
}

TEST_CASE("multi point condition norm") {
  MultiPointCondition m;
  m.side = +1;
  m.alphas = {0.3, -0.2};
  m.etas = {0.0, 0.5};
  CHECK(m.alpha_norm() == doctest::Approx(0.5));
}

TEST_CASE("problem construction validates eta placement") {
  ProblemSpec s;
  s.r = CoefficientSpec{"builtin", "one", {}, {}, 0.0};
  MultiPointCondition bm{-1, {0.5}, {0.0}};
  MultiPointCondition bp{+1, {0.5}, {0.0}};
  s.bc_minus = bm;
  s.bc_plus = bp;
  CHECK_NOTHROW(make_problem(s));

  // eta = +1 on the plus side collapses the condition
  ProblemSpec bad = s;
  bad.bc_plus = MultiPointCondition{+1, {0.5}, {1.0}};
  CHECK_THROWS_AS(make_problem(bad), std::invalid_argument);

  ProblemSpec bad2 = s;
  bad2.bc_minus = MultiPointCondition{-1, {0.5}, {-1.0}};
  CHECK_THROWS_AS(make_problem(bad2), std::invalid_argument);

  // eta = -1 on the plus side is allowed
  ProblemSpec ok = s;
  ok.bc_plus = MultiPointCondition{+1, {0.5}, {-1.0}};
  CHECK_NOTHROW(make_problem(ok));

  ProblemSpec mismatched = s;
  mismatched.bc_plus = MultiPointCondition{+1, {0.5, 0.1}, {0.0}};
  CHECK_THROWS_AS(make_problem(mismatched), std::invalid_argument);

  ProblemSpec degenerate_sep = s;
  degenerate_sep.bc_minus = SeparatedCondition{0.0, 0.0};
  CHECK_THROWS_AS(make_problem(degenerate_sep), std::invalid_argument);
}

TEST_CASE("json round trip preserves the problem") {
  const char* text = R"json({
    "r": {"kind": "expression", "body": "2 - cos(pi*x/2)"},
    "bc_minus": {"alphas": [0.3, -0.1], "etas": [-0.5, 0.25]},
    "bc_plus": {"alphas": [0.5], "etas": [0.0]}
  })json";
  Problem p = parse_problem(text);
  CHECK(p.r.value(1.0) == doctest::Approx(2.0));
  CHECK(p.mp(-1).alphas.size() == 2);
  CHECK(p.mp(+1).etas[0] == doctest::Approx(0.0));

  std::string dumped = serialize_problem(p);
  Problem q = parse_problem(dumped);
  CHECK(serialize_problem(q) == dumped);  // byte stable after one cycle
  CHECK(q.r.value(0.3) == doctest::Approx(p.r.value(0.3)));
  CHECK(q.mp(-1).alphas[1] == doctest::Approx(-0.1));
}

TEST_CASE("json separated minus endpoint and product nonlinearity") {
  const char* text = R"json({
    "r": {"kind": "builtin", "body": "one"},
    "bc_minus": {"c0": 1.0, "c1": 0.0},
    "bc_plus": {"alphas": [0.5], "etas": [0.0]},
    "g_product": {
      "r": {"kind": "builtin", "body": "one"},
      "gtilde": "(1+15*u^2)/(1+u^2)"
    }
  })json";
  Problem p = parse_problem(text);
  CHECK(p.separated_minus());
  CHECK(p.sep_minus().c0 == doctest::Approx(1.0));
  REQUIRE(p.g.has_value());
  CHECK(p.g->value2(0.2, 0.0) == doctest::Approx(1.0));
  CHECK(p.g->value2(0.2, 1.0) == doctest::Approx(8.0));
  REQUIRE(p.g_tilde_part.has_value());
  CHECK(p.g_tilde_part->value2(0.0, 1.0) == doctest::Approx(8.0));

  std::string dumped = serialize_problem(p);
  Problem q = parse_problem(dumped);
  CHECK(q.g->value2(0.2, 1.0) == doctest::Approx(8.0));
}

TEST_CASE("validate flags positivity and alpha norms") {
  {
    Problem p = parse_problem(R"json({
      "r": {"kind": "builtin", "body": "one"},
      "bc_minus": {"alphas": [0.1], "etas": [0.0]},
      "bc_plus": {"alphas": [0.1], "etas": [0.0]}
    })json");
    ValidationReport rep = validate(p);
    CHECK(rep.ok);
    CHECK(rep.r_positive);
    CHECK(rep.minus_below_one);
    CHECK(rep.plus_below_one);
    CHECK(rep.minus_below_a1);
    CHECK(rep.plus_below_a1);
    CHECK(rep.a1 > 0.0);
    CHECK(rep.a1 < 1.0);
  }
  {
    // steep weight: a1 is about 0.03, so |alpha| = 0.1 clears 1 but not a1
    Problem p = parse_problem(R"json({
      "r": {"kind": "expression", "body": "2 - cos(pi*x/2)"},
      "bc_minus": {"alphas": [0.1], "etas": [0.0]},
      "bc_plus": {"alphas": [0.1], "etas": [0.0]}
    })json");
    ValidationReport rep = validate(p);
    CHECK(rep.r_positive);
    CHECK(rep.minus_below_one);
    CHECK_FALSE(rep.minus_below_a1);
    CHECK(rep.a1 == doctest::Approx(0.030557).epsilon(2e-2));
  }
  {
    // norm 1.2 breaks the |alpha| < 1 requirement
    Problem p = parse_problem(R"json({
      "r": {"kind": "builtin", "body": "one"},
      "bc_minus": {"alphas": [1.2], "etas": [0.0]},
      "bc_plus": {"alphas": [0.1], "etas": [0.0]}
    })json");
    ValidationReport rep = validate(p);
    CHECK_FALSE(rep.minus_below_one);
    CHECK(rep.plus_below_one);
    CHECK_FALSE(rep.ok);
  }
  {
    // r dips negative on (-1,1)
    Problem p = parse_problem(R"json({
      "r": {"kind": "expression", "body": "x"},
      "bc_minus": {"alphas": [0.1], "etas": [0.0]},
      "bc_plus": {"alphas": [0.1], "etas": [0.0]}
    })json");
    ValidationReport rep = validate(p);
    CHECK_FALSE(rep.r_positive);
    CHECK_FALSE(rep.ok);
  }
  {
    // weight must not depend on u
    Problem p = parse_problem(R"json({
      "r": {"kind": "expression", "body": "2 + u"},
      "bc_minus": {"alphas": [0.1], "etas": [0.0]},
      "bc_plus": {"alphas": [0.1], "etas": [0.0]}
    })json");
    ValidationReport rep = validate(p);
    CHECK_FALSE(rep.ok);
  }
}
