#include "mpspec/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpspec {

Coefficient Coefficient::expression(const std::string& body) {
  Coefficient c;
  c.kind_ = Kind::expr;
  c.f_ = Expr::parse(body);
  c.fx_ = c.f_.diff('x');
  c.fu_ = c.f_.diff('u');
  c.uses_u_ = c.f_.uses('u');
  c.spec_ = CoefficientSpec{"expression", body, {}, {}, 0.0};
  return c;
}

Coefficient Coefficient::piecewise(std::vector<double> breaks, std::vector<double> values,
                                   double smoothing_width) {
  if (values.size() != breaks.size() + 1)
    throw std::invalid_argument("piecewise coefficient needs breaks.size()+1 values");
  if (breaks.empty())
    throw std::invalid_argument("piecewise coefficient needs at least one break");
  if (!(smoothing_width >= 0.0))
    throw std::invalid_argument("smoothing_width must be >= 0");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1]))
      throw std::invalid_argument("piecewise breaks must be strictly increasing");
  double eps = smoothing_width;
  if (!(breaks.front() - eps > -1.0) || !(breaks.back() + eps < 1.0))
    throw std::invalid_argument("piecewise breaks (with smoothing) must lie inside (-1,1)");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i + 1] - breaks[i] > 2 * eps))
      throw std::invalid_argument("smoothing windows overlap");

  Coefficient c;
  c.kind_ = Kind::piecewise;
  c.pw_breaks_ = breaks;
  c.pw_values_ = values;
  c.pw_eps_ = eps;
  for (double b : breaks) {
    if (eps > 0.0) {
      c.breaks_all_.push_back(b - eps);
      c.breaks_all_.push_back(b + eps);
    } else {
      c.breaks_all_.push_back(b);
    }
  }
  c.spec_ = CoefficientSpec{"piecewise", "", std::move(breaks), std::move(values), eps};
  return c;
}

Coefficient Coefficient::builtin(const std::string& name) {
  if (name == "one") {
    Coefficient c;
    c.kind_ = Kind::fn;
    c.fn_value_ = [](double) { return 1.0; };
    c.fn_derivative_ = [](double) { return 0.0; };
    c.spec_ = CoefficientSpec{"builtin", "one", {}, {}, 0.0};
    return c;
  }
  throw std::invalid_argument("unknown builtin coefficient '" + name + "'");
}

Coefficient Coefficient::function(std::function<double(double)> value,
                                  std::function<double(double)> derivative,
                                  std::vector<double> breakpoints) {
  Coefficient c;
  c.kind_ = Kind::fn;
  c.fn_value_ = std::move(value);
  c.fn_derivative_ = std::move(derivative);
  c.breaks_all_ = std::move(breakpoints);
  c.spec_ = CoefficientSpec{"builtin", "<callback>", {}, {}, 0.0};
  return c;
}

Coefficient Coefficient::product(Coefficient r_of_x, Coefficient g_of_u) {
  Coefficient c;
  c.kind_ = Kind::prod;
  c.breaks_all_ = r_of_x.breakpoints();
  c.prod_r_ = std::make_shared<const Coefficient>(std::move(r_of_x));
  c.prod_g_ = std::make_shared<const Coefficient>(std::move(g_of_u));
  c.uses_u_ = true;
  c.spec_ = CoefficientSpec{"product", "", {}, {}, 0.0};
  return c;
}

Coefficient Coefficient::from_spec(const CoefficientSpec& spec) {
  if (spec.kind == "expression") return expression(spec.body);
  if (spec.kind == "piecewise" || spec.kind == "piecewise-smooth")
    return piecewise(spec.breaks, spec.values, spec.smoothing_width);
  if (spec.kind == "builtin") return builtin(spec.body);
  throw std::invalid_argument("unknown coefficient kind '" + spec.kind + "'");
}

bool Coefficient::depends_on_u() const { return uses_u_; }

double Coefficient::pw_value(double x) const {
  const auto& b = pw_breaks_;
  std::size_t seg = std::upper_bound(b.begin(), b.end(), x) - b.begin();
  if (pw_eps_ > 0.0) {
    // blend across the nearest break when inside its window
    if (seg > 0 && x < b[seg - 1] + pw_eps_) {
      double t = (x - (b[seg - 1] - pw_eps_)) / (2 * pw_eps_);
      double s = t * t * (3 - 2 * t);
      return pw_values_[seg - 1] + (pw_values_[seg] - pw_values_[seg - 1]) * s;
    }
    if (seg < b.size() && x > b[seg] - pw_eps_) {
      double t = (x - (b[seg] - pw_eps_)) / (2 * pw_eps_);
      double s = t * t * (3 - 2 * t);
      return pw_values_[seg] + (pw_values_[seg + 1] - pw_values_[seg]) * s;
    }
  }
  return pw_values_[seg];
}

double Coefficient::pw_derivative(double x) const {
  if (pw_eps_ <= 0.0) return 0.0;
  const auto& b = pw_breaks_;
  std::size_t seg = std::upper_bound(b.begin(), b.end(), x) - b.begin();
  if (seg > 0 && x < b[seg - 1] + pw_eps_) {
    double t = (x - (b[seg - 1] - pw_eps_)) / (2 * pw_eps_);
    return (pw_values_[seg] - pw_values_[seg - 1]) * 6 * t * (1 - t) / (2 * pw_eps_);
  }
  if (seg < b.size() && x > b[seg] - pw_eps_) {
    double t = (x - (b[seg] - pw_eps_)) / (2 * pw_eps_);
    return (pw_values_[seg + 1] - pw_values_[seg]) * 6 * t * (1 - t) / (2 * pw_eps_);
  }
  return 0.0;
}

double Coefficient::value2(double x, double u) const {
  switch (kind_) {
    case Kind::expr: return f_.eval(x, u);
    case Kind::piecewise: return pw_value(x);
    case Kind::fn: return fn_value_(x);
    case Kind::prod: return prod_r_->value(x) * prod_g_->value2(0.0, u);
    case Kind::none: break;
  }
  throw std::logic_error("empty coefficient");
}

double Coefficient::dx(double x, double u) const {
  switch (kind_) {
    case Kind::expr: return fx_.eval(x, u);
    case Kind::piecewise: return pw_derivative(x);
    case Kind::fn: return fn_derivative_(x);
    case Kind::prod: return prod_r_->derivative(x) * prod_g_->value2(0.0, u);
    case Kind::none: break;
  }
  throw std::logic_error("empty coefficient");
}

double Coefficient::du(double x, double u) const {
  switch (kind_) {
    case Kind::expr: return fu_.eval(x, u);
    case Kind::piecewise: return 0.0;
    case Kind::fn: return 0.0;
    case Kind::prod: return prod_r_->value(x) * prod_g_->du(0.0, u);
    case Kind::none: break;
  }
  throw std::logic_error("empty coefficient");
}

}  // namespace mpspec
