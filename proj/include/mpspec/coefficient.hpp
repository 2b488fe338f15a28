// Coefficient functions on [-1,1]: the weight r(x) and nonlinearities g(x,u).
// Backed by a parsed expression, a piecewise-constant profile with optional
// C^1 smoothstep blending at the jumps, a named builtin, a raw callback, or
// a product r(x)*gtilde(u). Every backend exposes values and first
// derivatives plus the list of breakpoints an integrator must not step over.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mpspec/expr.hpp"

namespace mpspec {

struct CoefficientSpec {
  std::string kind;  // "expression" | "piecewise" | "builtin"
  std::string body;  // expression text or builtin name
  std::vector<double> breaks;  // piecewise: interior jump locations, ascending
  std::vector<double> values;  // piecewise: breaks.size()+1 segment values
  double smoothing_width = 0.0;
};

class Coefficient {
 public:
  Coefficient() = default;

  static Coefficient from_spec(const CoefficientSpec& spec);
  static Coefficient expression(const std::string& body);
  static Coefficient piecewise(std::vector<double> breaks, std::vector<double> values,
                               double smoothing_width);
  static Coefficient builtin(const std::string& name);
  static Coefficient function(std::function<double(double)> value,
                              std::function<double(double)> derivative,
                              std::vector<double> breakpoints = {});
  static Coefficient product(Coefficient r_of_x, Coefficient g_of_u);

  bool valid() const { return kind_ != Kind::none; }
  bool depends_on_u() const;

  // univariate view (u = 0)
  double value(double x) const { return value2(x, 0.0); }
  double derivative(double x) const { return dx(x, 0.0); }

  // bivariate view
  double value2(double x, double u) const;
  double dx(double x, double u) const;
  double du(double x, double u) const;

  // x-locations where smoothness degrades; integrators restart here
  const std::vector<double>& breakpoints() const { return breaks_all_; }

  const CoefficientSpec& spec() const { return spec_; }

 private:
  enum class Kind { none, expr, piecewise, fn, prod };
  Kind kind_ = Kind::none;
  CoefficientSpec spec_;

  Expr f_, fx_, fu_;
  bool uses_u_ = false;

  std::vector<double> pw_breaks_, pw_values_;
  double pw_eps_ = 0.0;
  double pw_value(double x) const;
  double pw_derivative(double x) const;

  std::function<double(double)> fn_value_, fn_derivative_;

  std::shared_ptr<const Coefficient> prod_r_, prod_g_;

  std::vector<double> breaks_all_;
};

}  // namespace mpspec
