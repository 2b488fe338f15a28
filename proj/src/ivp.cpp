#include "mpspec/ivp.hpp"

#include <cmath>
#include <ostream>

namespace mpspec {

static OdeOptions make_options(const Coefficient& r, double tol) {
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  opt.breakpoints = r.breakpoints();
  return opt;
}

Trajectory integrate_solution(const Coefficient& r, double lambda, IvpInit init,
                              double from, double to, double tol) {
  auto rhs = [&r, lambda](double x, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = -lambda * r.value(x) * y[0];
  };
  double y0[2] = {init.u, init.up};
  return integrate_ode(rhs, 2, y0, from, to, make_options(r, tol));
}

Trajectory integrate_two_sided(const Coefficient& r, double lambda, IvpInit at_zero,
                               double tol) {
  auto rhs = [&r, lambda](double x, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = -lambda * r.value(x) * y[0];
  };
  double y0[2] = {at_zero.u, at_zero.up};
  OdeOptions opt = make_options(r, tol);
  Trajectory left = integrate_ode(rhs, 2, y0, 0.0, -1.0, opt);
  Trajectory right = integrate_ode(rhs, 2, y0, 0.0, 1.0, opt);
  return Trajectory::merge(std::move(left), right);
}

Trajectory integrate_basis(const Coefficient& r, double lambda, double tol) {
  auto rhs = [&r, lambda](double x, const double* y, double* dy) {
    double rv = r.value(x);
    dy[0] = y[1];
    dy[1] = -lambda * rv * y[0];
    dy[2] = y[3];
    dy[3] = -lambda * rv * y[2];
  };
  double y0[4] = {1.0, 0.0, 0.0, 1.0};
  OdeOptions opt = make_options(r, tol);
  Trajectory left = integrate_ode(rhs, 4, y0, 0.0, -1.0, opt);
  Trajectory right = integrate_ode(rhs, 4, y0, 0.0, 1.0, opt);
  return Trajectory::merge(std::move(left), right);
}

void family_init(const Coefficient& r, double lambda, double theta, Family family,
                 double out[6]) {
  double st = std::sin(theta), ct = std::cos(theta);
  if (family == Family::energy) {
    if (!(lambda > 0.0))
      throw std::domain_error("energy family needs lambda > 0");
    double mu = std::sqrt(lambda * r.value(0.0));
    out[0] = st;
    out[1] = mu * ct;
    out[2] = ct;
    out[3] = -mu * st;
    out[4] = 0.0;
    out[5] = 0.5 * std::sqrt(r.value(0.0) / lambda) * ct;
  } else {
    out[0] = st;
    out[1] = ct;
    out[2] = ct;
    out[3] = -st;
    out[4] = 0.0;
    out[5] = 0.0;
  }
}

VariationalTrajectory integrate_variational(const Coefficient& r, double lambda,
                                            double theta, Family family, double tol) {
  auto rhs = [&r, lambda](double x, const double* y, double* dy) {
    double rv = r.value(x);
    dy[0] = y[1];
    dy[1] = -lambda * rv * y[0];
    dy[2] = y[3];
    dy[3] = -lambda * rv * y[2];
    dy[4] = y[5];
    dy[5] = -lambda * rv * y[4] - rv * y[0];
    dy[6] = rv * y[0] * y[0];
  };
  double y0[7];
  family_init(r, lambda, theta, family, y0);
  y0[6] = 0.0;
  OdeOptions opt = make_options(r, tol);
  Trajectory left = integrate_ode(rhs, 7, y0, 0.0, -1.0, opt);
  Trajectory right = integrate_ode(rhs, 7, y0, 0.0, 1.0, opt);

  VariationalTrajectory vt;
  vt.family = family;
  vt.lambda = lambda;
  vt.theta = theta;
  vt.traj = Trajectory::merge(std::move(left), right);
  vt.sup_w = vt.traj.sup_abs(0);
  return vt;
}

void write_csv(const Trajectory& traj, std::ostream& os,
               const std::vector<std::string>& columns) {
  os << "x";
  for (const auto& c : columns) os << "," << c;
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < traj.nodes(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.xs()[i]);
    os << buf;
    for (int c = 0; c < traj.dim() && c < static_cast<int>(columns.size()); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.node_value(i, c));
      os << "," << buf;
    }
    os << "\n";
  }
}

}  // namespace mpspec
