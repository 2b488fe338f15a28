#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mpspec/expr.hpp"

using mpspec::Expr;
using mpspec::ParseError;

TEST_CASE("constants and simple bodies") {
  CHECK(Expr::parse("1").eval(0.3) == 1.0);
  CHECK(Expr::parse("pi").eval(0.0) == doctest::Approx(3.14159265358979).epsilon(1e-14));
  CHECK(Expr::parse("e").eval(0.0) == doctest::Approx(2.718281828459045).epsilon(1e-14));
  CHECK(Expr::parse("2 - cos(pi*x/2)").eval(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Expr::parse("2 - cos(pi*x/2)").eval(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(Expr::parse("(1+15*u^2)/(1+u^2)").eval(0.0, 1.0) == doctest::Approx(8.0));
  CHECK(Expr::parse("sqrt(4+x)").eval(0.0) == doctest::Approx(2.0));
}

TEST_CASE("precedence") {
  CHECK(Expr::parse("2+3*4^2").eval(0) == doctest::Approx(50.0));
  CHECK(Expr::parse("-x^2").eval(3.0) == doctest::Approx(-9.0));
  CHECK(Expr::parse("2^-2").eval(0) == doctest::Approx(0.25));
  CHECK(Expr::parse("2^3^2").eval(0) == doctest::Approx(512.0));  // right assoc
  CHECK(Expr::parse("6/3/2").eval(0) == doctest::Approx(1.0));    // left assoc
  CHECK(Expr::parse("abs(-3*x)").eval(2.0) == doctest::Approx(6.0));
}

TEST_CASE("symbolic derivative at fixed points") {
  Expr r = Expr::parse("2 - cos(pi*x/2)");
  Expr rx = r.diff('x');
  CHECK(rx.eval(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  // r'(1) = pi/2 sin(pi/2) = pi/2
  CHECK(rx.eval(1.0) == doctest::Approx(1.5707963267948966).epsilon(1e-14));

  Expr g = Expr::parse("(1+15*u^2)/(1+u^2)");
  Expr gu = g.diff('u');
  // g'(u) = 28u/(1+u^2)^2, at u=1: 7
  CHECK(gu.eval(0.0, 1.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(g.diff('x').eval(0.5, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("derivative matches central differences") {
  const char* bodies[] = {
      "2 - cos(pi*x/2)",
      "1 + 0.3*sin(3*x) + 0.2*x^2",
      "exp(-x^2)*(2+x)",
      "sqrt(4+x) / (2 + sin(x))",
      "(2+x)^(1+x/2)",  // exponent depends on x
      "abs(x - 0.25) + x^3",
  };
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> U(-0.95, 0.95);
  for (const char* body : bodies) {
    Expr f = Expr::parse(body);
    Expr fx = f.diff('x');
    for (int i = 0; i < 40; ++i) {
      double x = U(rng);
      if (std::fabs(x - 0.25) < 1e-3) continue;  // abs kink
      double h = 1e-6;
      double fd = (f.eval(x + h) - f.eval(x - h)) / (2 * h);
      double an = fx.eval(x);
      CHECK(an == doctest::Approx(fd).epsilon(1e-6).scale(1.0 + std::fabs(an)));
    }
  }
}

TEST_CASE("derivative in u matches central differences") {
  Expr g = Expr::parse("(1+15*u^2)/(1+u^2) * (2 + 0.1*sin(x))");
  Expr gu = g.diff('u');
  Expr gx = g.diff('x');
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int i = 0; i < 40; ++i) {
    double x = 0.3, u = U(rng);
    double h = 1e-6;
    double fdu = (g.eval(x, u + h) - g.eval(x, u - h)) / (2 * h);
    double fdx = (g.eval(x + h, u) - g.eval(x - h, u)) / (2 * h);
    CHECK(gu.eval(x, u) == doctest::Approx(fdu).epsilon(1e-6).scale(1.0));
    CHECK(gx.eval(x, u) == doctest::Approx(fdx).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("uses() reports variables") {
  CHECK(Expr::parse("2 - cos(pi*x/2)").uses('x'));
  CHECK_FALSE(Expr::parse("2 - cos(pi*x/2)").uses('u'));
  CHECK(Expr::parse("(1+15*u^2)/(1+u^2)").uses('u'));
}

TEST_CASE("errors carry positions") {
  CHECK_THROWS_AS(Expr::parse("2 +* x"), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(Expr::parse("(1+x"), ParseError);
  CHECK_THROWS_AS(Expr::parse("1 +"), ParseError);
  CHECK_THROWS_AS(Expr::parse("sin x"), ParseError);
  CHECK_THROWS_AS(Expr::parse("1 2"), ParseError);
  try {
    Expr::parse("foo(x)");
  } catch (const ParseError& e) {
    CHECK(e.position == 0);
  }
  try {
    Expr::parse("2 +* x");
  } catch (const ParseError& e) {
    CHECK(e.position == 3);
  }
}
