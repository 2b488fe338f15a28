// Boundary characteristic functions. For a solution family w(lambda,theta)
// the two-sided functions are
//   Gamma^s = B^s(w),   B^+(u) = u(1)  - sum_i alpha_i^+ u(eta_i^+),
//                       B^-(u) = u(-1) - sum_i alpha_i^- u(eta_i^-)
//                            or c0 u(-1) + c1 u'(-1) when separated,
// and an eigenvalue is a simultaneous zero Gamma^- = Gamma^+ = 0. Because
// B^s is linear, derivatives in lambda and theta come from applying B^s to
// the variational columns of the same trajectory.
//
// The scalar determinant D(lambda) = det [[B^- phi0, B^- phi1],
// [B^+ phi0, B^+ phi1]] over the solution basis phi0, phi1 with data (1,0),
// (0,1) at x = 0 vanishes exactly at eigenvalues and is smooth through
// lambda <= 0, which makes it the robust scan target.
//
// The single-condition function gamma_single(theta) = w(theta)(eta0) -
// sum_i alpha_i w(theta)(eta_i) at fixed lambda is sine-like in theta; its
// zero set on [0,pi) is probed by scan + bisection.
#pragma once

#include <vector>

#include "mpspec/ivp.hpp"
#include "mpspec/problem.hpp"

namespace mpspec {

struct GammaValue {
  double value = 0.0;
  double d_lambda = 0.0;
  double d_theta = 0.0;
  int side = +1;
  Family family = Family::energy;
};

GammaValue gamma(const VariationalTrajectory& vt, const MultiPointCondition& bc);
GammaValue gamma(const VariationalTrajectory& vt, const SeparatedCondition& bc);
// dispatches on the problem's condition for that side
GammaValue gamma_side(const Problem& p, const VariationalTrajectory& vt, int side);

struct JacobianValue {
  // rows: minus, plus; columns: d_lambda, d_theta
  double entries[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double det = 0.0;
  // |det| scaled by the row norms; ~0 flags a degenerate (non-simple) pair
  double normalized() const;
};

JacobianValue jacobian(const Problem& p, const VariationalTrajectory& vt);
JacobianValue jacobian(const Problem& p, double lambda, double theta, Family family,
                       double tol = 1e-10);

// Boundary matrix over the slope basis phi0, phi1 with data (1,0), (0,1) at
// x = 0: rows are the minus and plus conditions, columns the basis members.
// Its determinant is D(lambda); its null vector (a,b) gives the eigenfunction
// a phi0 + b phi1, i.e. the initial data (w,w')(0) = (a,b).
struct BoundaryMatrix {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

BoundaryMatrix boundary_matrix(const Problem& p, double lambda, double tol = 1e-10);

// D(lambda); any real lambda, including <= 0.
double characteristic_determinant(const Problem& p, double lambda, double tol = 1e-10);

// Section-3 style single condition u(eta0) = sum alpha_i u(eta_i) applied to
// the energy-family solution at fixed lambda > 0.
double gamma_single(const Coefficient& r, double lambda, double theta, double eta0,
                    const MultiPointCondition& mpc, double tol = 1e-10);

struct ThetaZero {
  double theta = 0.0;
  double d_theta = 0.0;  // slope of gamma_single in theta at the zero
};

// All zeros of theta -> gamma_single on [0,pi), scan + bisection to 1e-12.
std::vector<ThetaZero> theta_zeros(const Coefficient& r, double lambda, double eta0,
                                   const MultiPointCondition& mpc, int scan = 721,
                                   double tol = 1e-10);

int count_theta_zeros(const Coefficient& r, double lambda, double eta0,
                      const MultiPointCondition& mpc, int scan = 721,
                      double tol = 1e-10);

}  // namespace mpspec
