// Turn-key study instances with certificates.
//
// run_example1 builds the piecewise weight r_delta (1 on [-delta,delta], 4
// outside) with the three-point condition u(+-1) = (sqrt(3)/2) u(0) and
// studies the window I_delta = [(pi/4delta)^2, (3pi/4delta)^2]. Because the
// weight is even, the solution basis at 0 splits into an even member phi0
// (u(0)=1, u'(0)=0) and an odd member phi1 (u(0)=0, u'(0)=1), and the
// characteristic determinant factors as 2 * gamma_e(lambda) * phi1(1;lambda)
// with gamma_e = phi0(1) - sqrt(3)/2.
//
// The energy argument certifies the even factor: where r = 1 the quantity
// u^2 + u'^2/lambda is constant, where r = 4 it is u^2 + u'^2/(4 lambda),
// so for lambda in the window phi0(1)^2 <= 1/4 + 3/4 phi0(delta)^2 <= 5/8,
// strictly below 3/4 = (sqrt(3)/2)^2. Hence no eigenvalue in the window has
// an eigenfunction with u(0) != 0; those are the eigenvalues the three-point
// coupling actually constrains, and eigenvalues_found lists them (none).
//
// The odd factor does have roots in the window: odd extensions of Dirichlet
// modes of the half interval. They vanish at 0 and at +-1 together, so every
// term of the boundary condition is zero and the coupling is vacuous on
// them. They are genuine eigenvalues of the instance and are reported
// separately as decoupled_roots, cross-checked against the determinant scan.
// A smoothing width > 0 replaces the jumps by symmetric C^1 ramps; the
// even/odd split persists and the scan-based certification is repeated,
// while the closed energy chain is replayed on the exact instance only.
//
// run_example2 constructs a genuinely double eigenvalue for a three-point
// condition. With r(x) = 2 - cos(pi x / 2), mu_D is the first Dirichlet
// eigenvalue of -u'' = mu r u on (0,1); the odd extension of its
// eigenfunction satisfies u(+-1) = a u(0) for every coefficient a, while the
// even solution v with v(0)=1, v'(0)=0 satisfies it exactly for a = v(1).
// At alpha = v(1) the instance u(+-1) = alpha u(0) therefore has a
// two-dimensional eigenspace at mu_D. Admissibility needs |alpha| < 1, which
// the energy ratio E(1)/E(0) <= r(1)/r(0) = 2 guarantees (E = u'^2 +
// mu r u^2 and E(0) = mu give v(1)^2 <= E(1)/(2 mu) < 1). The report
// certifies the bound, the Jacobian degeneracy at (mu_D, theta), the oracle
// cluster count, linear independence via the Gram determinant, and the
// alpha-independence of the odd mode's boundary residual.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mpspec/ode.hpp"
#include "mpspec/problem.hpp"

namespace mpspec {

struct GapReport {
  double delta = 0.0;
  double smoothing = 0.0;
  std::pair<double, double> interval{0.0, 0.0};  // full window I_delta
  std::pair<double, double> scanned{0.0, 0.0};   // interval shrunk by the margins
  // eigenvalues in the window whose eigenfunctions the condition constrains
  // (nonzero value at the coupling point); the certified claim is that there
  // are none
  std::vector<double> eigenvalues_found;
  // eigenvalues whose eigenfunctions vanish at the coupling point and both
  // endpoints, satisfying the condition vacuously
  std::vector<double> decoupled_roots;
  double min_coupled_margin = 0.0;  // min over the window of |phi0(1) - sqrt(3)/2|
  bool gap_certified = false;
  // lambda vs D(lambda) over the scanned window, for plotting
  std::vector<std::pair<double, double>> scan_samples;
  // energy chain on the exact (unsmoothed) instance at 20 lambda samples
  bool energy_chain_ok = false;
  double max_end_sq = 0.0;      // max over samples of u(1)^2
  double max_chain_bound = 0.0; // max over samples of 1/4 + 3/4 u(delta)^2
  std::vector<std::string> notes;
};

GapReport run_example1(double delta, double smoothing = 0.0);

struct DoubleEigenReport {
  double mu_D = 0.0;   // first Dirichlet eigenvalue on (0,1)
  double alpha = 0.0;  // even solution's endpoint value v(1)
  double jacobian_det = 0.0;  // scaled |det J| at (mu_D, theta of the even mode)
  int oracle_multiplicity = 0;
  bool alpha_bound_ok = false;  // |alpha| < 1, the admissibility requirement
  double energy_ratio = 0.0;    // E(1)/E(0) of the even solution, < 2 by the bound
  double gram_det = 0.0;        // Gram determinant of the normalized pair
  // sup-scaled |w(+-1) - a w(0)| of the odd mode, for a in {0, 0.3, alpha}
  double odd_bc_residual_max = 0.0;
  Trajectory even_mode;  // v extended to [-1,1]; components u, u'
  Trajectory odd_mode;   // odd Dirichlet mode extended to [-1,1]
  std::vector<std::string> notes;
};

DoubleEigenReport run_example2();

// CSV with header "lambda,determinant", one row per scan sample.
void write_scan_csv(const GapReport& report, const std::string& path);

}  // namespace mpspec
