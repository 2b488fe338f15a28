// Adaptive embedded Runge-Kutta 5(4) integration (Dormand-Prince pair) with
// cubic Hermite dense output. Accepted steps are stored as (x, y, y') nodes;
// sampling between nodes interpolates with the Hermite cubic, whose error at
// the default tolerances sits below 1e-8 of the solution scale. Coefficient
// breakpoints are hit exactly so piecewise data never straddles a step.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpspec {

struct IntegrationError : std::runtime_error {
  double where;
  IntegrationError(const std::string& msg, double x)
      : std::runtime_error(msg + " near x = " + std::to_string(x)), where(x) {}
};

using OdeFn = std::function<void(double x, const double* y, double* dy)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  int max_steps = 4000000;
  std::vector<double> breakpoints;  // forced step boundaries inside the span
};

class Trajectory {
 public:
  Trajectory() = default;

  int dim() const { return dim_; }
  double a() const { return xs_.front(); }
  double b() const { return xs_.back(); }
  std::size_t nodes() const { return xs_.size(); }
  const std::vector<double>& xs() const { return xs_; }
  double node_value(std::size_t i, int c) const { return ys_[i * dim_ + c]; }
  double node_slope(std::size_t i, int c) const { return fs_[i * dim_ + c]; }

  // cubic Hermite sample of all components at x in [a,b]
  void sample(double x, double* y_out) const;
  double value(double x, int c) const;

  // max |component c| over nodes and interval midpoints
  double sup_abs(int c) const;

  static Trajectory merge(Trajectory left, const Trajectory& right);

  // assemble from node data: xs strictly ascending, ys/fs row-major dim-wide;
  // fs holds the derivative of each component for Hermite sampling
  static Trajectory from_nodes(std::vector<double> xs, std::vector<double> ys,
                               std::vector<double> fs, int dim);

 private:
  int dim_ = 0;
  std::vector<double> xs_;       // ascending
  std::vector<double> ys_, fs_;  // row-major node data

  std::size_t locate(double x) const;
  friend Trajectory integrate_ode(const OdeFn&, int, const double*, double, double,
                                  const OdeOptions&);
};

// Integrates from x0 to x1 (either direction); the returned trajectory is
// stored with ascending x regardless of the direction of travel.
Trajectory integrate_ode(const OdeFn& f, int dim, const double* y0, double x0, double x1,
                         const OdeOptions& opt = {});

// Composite 4-point Gauss-Legendre quadrature of fn over [x0,x1] using the
// trajectory mesh as panels (x0 <= x1 or reversed; the sign follows the
// orientation of the requested interval).
double integrate_over(const Trajectory& traj, const std::function<double(double)>& fn,
                      double x0, double x1);

// Brent root refinement on [lo,hi]; requires a sign change.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double flo, double fhi, double xtol, int max_iter = 200);

}  // namespace mpspec
