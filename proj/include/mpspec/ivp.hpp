// Shooting families for -w'' = lambda r(x) w started at x = 0.
//
// Two normalizations are used. The energy family fixes
//   w(0) = sin(theta),  w'(0) = (lambda r(0))^{1/2} cos(theta),
// so the Lyapunov energy E = w'^2 + lambda r w^2 starts at E(0) = lambda r(0)
// independent of theta. The slope family fixes w(0) = sin(theta),
// w'(0) = cos(theta); its initial data do not involve lambda and stay smooth
// through lambda <= 0.
//
// integrate_variational carries the joint flow of w, the derivative fields
// w_theta and w_lambda (the latter solves the forced equation
// -w_lambda'' = lambda r w_lambda + r w) and the running integral
// q(x) = int_0^x r w^2, all to the same tolerance.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpspec/coefficient.hpp"
#include "mpspec/ode.hpp"

namespace mpspec {

enum class Family { energy, slope };

struct IvpInit {
  double u = 0.0;
  double up = 0.0;
};

// Single solution of -u'' = lambda r u from (u,u') = init at x = from.
Trajectory integrate_solution(const Coefficient& r, double lambda, IvpInit init,
                              double from, double to, double tol = 1e-10);

// Same equation integrated from x = 0 out to both endpoints; 2 components.
Trajectory integrate_two_sided(const Coefficient& r, double lambda, IvpInit at_zero,
                               double tol = 1e-10);

// Slope-basis pair phi0 (u,u')(0) = (1,0) and phi1 (0,1) as one 4-component
// trajectory over [-1,1]; smooth in lambda through lambda = 0.
Trajectory integrate_basis(const Coefficient& r, double lambda, double tol = 1e-10);

struct VariationalTrajectory {
  Family family = Family::energy;
  double lambda = 0.0;
  double theta = 0.0;
  Trajectory traj;  // components: w, w', w_th, w_th', w_la, w_la', q
  double sup_w = 0.0;

  double w(double x) const { return traj.value(x, 0); }
  double wp(double x) const { return traj.value(x, 1); }
  double wth(double x) const { return traj.value(x, 2); }
  double wthp(double x) const { return traj.value(x, 3); }
  double wla(double x) const { return traj.value(x, 4); }
  double wlap(double x) const { return traj.value(x, 5); }
  double q(double x) const { return traj.value(x, 6); }
};

// Joint flow over [-1,1]; requires lambda > 0 for the energy family.
VariationalTrajectory integrate_variational(const Coefficient& r, double lambda,
                                            double theta, Family family,
                                            double tol = 1e-10);

// Initial data of the two families at x = 0 (w, w', w_th, w_th', w_la, w_la').
void family_init(const Coefficient& r, double lambda, double theta, Family family,
                 double out[6]);

// CSV export: header line, then one row per node with the named columns.
void write_csv(const Trajectory& traj, std::ostream& os,
               const std::vector<std::string>& columns);

}  // namespace mpspec
