// Problem geometry: -u'' = lambda r(x) u on (-1,1) with boundary conditions
//   u(1)  = sum_i alpha_i^+ u(eta_i^+)          (always multi-point)
//   u(-1) = sum_i alpha_i^- u(eta_i^-)          or  c0 u(-1) + c1 u'(-1) = 0.
// Optional nonlinear right-hand sides: g(x,u) for -u'' = lambda g(x,u) u and
// f(x,u) for -u'' = f(x,u). A declared product form g = r(x)*gtilde(u)
// additionally carries the limits gtilde(0) and gtilde(+-inf).
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mpspec/coefficient.hpp"

namespace mpspec {

struct MultiPointCondition {
  int side = +1;  // +1 for the condition at x = 1, -1 for x = -1
  std::vector<double> alphas;
  std::vector<double> etas;
  double alpha_norm() const;  // sum of |alpha_i|
};

struct SeparatedCondition {
  double c0 = 1.0;
  double c1 = 0.0;  // c0 u(-1) + c1 u'(-1) = 0
};

struct ProblemSpec {
  CoefficientSpec r;
  std::variant<MultiPointCondition, SeparatedCondition> bc_minus;
  MultiPointCondition bc_plus;
  std::optional<CoefficientSpec> g;  // general g(x,u)
  std::optional<CoefficientSpec> f;  // general f(x,u)
  // declared product form g = r_g(x) * gtilde(u); overrides g when present
  std::optional<std::pair<CoefficientSpec, CoefficientSpec>> g_product;
};

struct Problem {
  ProblemSpec spec;
  Coefficient r;
  std::optional<Coefficient> g;  // assembled from g_product when declared
  std::optional<Coefficient> f;
  std::optional<Coefficient> g_r_part;      // product form only
  std::optional<Coefficient> g_tilde_part;  // product form only

  bool separated_minus() const {
    return std::holds_alternative<SeparatedCondition>(spec.bc_minus);
  }
  const MultiPointCondition& mp_minus() const {
    return std::get<MultiPointCondition>(spec.bc_minus);
  }
  const SeparatedCondition& sep_minus() const {
    return std::get<SeparatedCondition>(spec.bc_minus);
  }
  const MultiPointCondition& mp_plus() const { return spec.bc_plus; }
  const MultiPointCondition& mp(int side) const {
    return side > 0 ? spec.bc_plus : mp_minus();
  }
};

// Throws std::invalid_argument / ParseError on malformed input.
Problem make_problem(ProblemSpec spec);
Problem parse_problem(const std::string& json_text);
std::string serialize_problem(const Problem& p, int indent = 2);

struct ValidationReport {
  bool ok = false;
  bool r_positive = false;
  double r_min_sampled = 0.0;
  double r_max_sampled = 0.0;
  double a1 = 0.0;
  double alpha_norm_minus = 0.0;  // zero when bc_minus is separated
  double alpha_norm_plus = 0.0;
  bool minus_below_one = false;
  bool plus_below_one = false;
  bool minus_below_a1 = false;
  bool plus_below_a1 = false;
  bool g_positive = true;   // only checked when g present
  std::vector<std::string> messages;
};

// Samples r (and g when present) on a uniform grid and reports the
// smallness flags |alpha| < 1 and |alpha| < a1.
ValidationReport validate(const Problem& p, int grid = 2001);

}  // namespace mpspec
