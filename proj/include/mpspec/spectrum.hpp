// Eigenvalue computation for the multi-point problem. The route of record is
// homotopy continuation in the boundary coefficients: the separated Dirichlet
// baseline (alpha = 0) is solved by oscillation-count bisection, then alpha is
// scaled from 0 to 1 with a Newton corrector on (Gamma^-, Gamma^+) = 0 in
// (lambda, theta) at every step. A determinant scan over a bracketing window
// backs up any k whose continuation fails, so a degenerate instance degrades
// to warnings instead of an empty result.
//
// Each returned pair carries its certificates: boundary residuals relative to
// sup|w|, a simplicity flag from the scaled Jacobian determinant, and the
// nodal class of the eigenfunction (sign-normalized so the class, when it
// exists, has positive type).
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mpspec/characteristic.hpp"
#include "mpspec/ivp.hpp"
#include "mpspec/problem.hpp"

namespace mpspec {

struct DirichletPair {
  int k = 0;
  double lambda = 0.0;
  double theta = 0.0;  // family normalization angle at x = 0
  Family family = Family::energy;  // energy when lambda >= 1, slope otherwise
};

// First K eigenpairs of the separated Dirichlet problem u(+-1) = 0.
// Throws std::runtime_error on bracket or classification failure (names k).
std::vector<DirichletPair> dirichlet_spectrum(const Coefficient& r, int K);

struct EigenCertificates {
  std::string nodal_class;  // "T_3^+" style; empty when unclassifiable
  bool simple = false;      // scaled |det J| above the degeneracy threshold
  double residual_minus = 0.0;  // |Gamma^-| / sup|w|
  double residual_plus = 0.0;
};

struct Eigenpair {
  int k = 0;
  double lambda = 0.0;
  double theta = 0.0;  // folded into [0, 2pi)
  Family family = Family::energy;
  Trajectory eigfun;  // variational trajectory; w is component 0, w' component 1
  JacobianValue jacobian;
  EigenCertificates certificates;
};

struct ContinuationError : std::runtime_error {
  double t = 0.0;       // homotopy parameter at the failure
  double lambda = 0.0;  // last accepted point
  double theta = 0.0;
  ContinuationError(const std::string& msg, double t_, double lam, double th)
      : std::runtime_error(msg), t(t_), lambda(lam), theta(th) {}
};

// Follows one eigenpair from the alpha = 0 baseline to the full problem.
// Step control: initial dt = 0.1, halved on corrector failure or nodal class
// change, abort below 1e-4. A degenerate Jacobian at a converged point aborts
// immediately. Throws ContinuationError.
Eigenpair continue_eigenpair(const Problem& p, const DirichletPair& baseline, int k);

struct SpectrumResult {
  std::vector<Eigenpair> pairs;  // sorted by lambda
  std::string method;            // "continuation", "scan", or "both"
  std::vector<std::string> warnings;
};

// Continuation for each k <= K with scan fallback; for a separated condition
// at x = -1 the problem reduces to one equation in lambda and is solved by a
// direct shooting scan instead.
SpectrumResult compute_spectrum(const Problem& p, int K);

struct ScanResult {
  std::vector<std::pair<double, double>> brackets;  // sign-change intervals
  std::vector<double> roots;            // refined to 1e-10 relative
  std::vector<double> even_candidates;  // |D| dips to ~0 without sign change
};

// Samples D(lambda) on a uniform grid over [lambda_lo, lambda_hi].
ScanResult scan_determinant(const Problem& p, double lambda_lo, double lambda_hi,
                            int grid);

// Eigenvalues of the separated comparison problem: sep at x = -1 and
// u'(1) = 0, by shooting and sign-change bisection in lambda. For the
// Neumann-Neumann case (c0 = 0) the constant mode mu = 0 is excluded and
// indexing starts at the first positive eigenvalue.
std::vector<double> separated_reference_spectrum(const Coefficient& r,
                                                 const SeparatedCondition& sep, int K);

struct InterlacingReport {
  std::vector<double> mu;      // K+1 separated reference eigenvalues (positive ones)
  std::vector<double> lambda;  // K eigenvalues of the half-separated problem
  bool ok = false;
  std::vector<std::string> violations;
};

// Requires bc_minus separated; computes lambda_k from the single remaining
// boundary equation and checks mu_k < lambda_k < mu_{k+1} (with mu_0 = 0
// prepended in the Neumann case).
InterlacingReport check_interlacing(const Problem& p, int K);

// True when the (sign-normalized) principal eigenfunction is strictly
// positive; evaluated on the closed interval when both sides carry nonzero
// alpha weights, on the open interval otherwise (endpoint values then vanish
// identically).
bool check_principal_positivity(const Eigenpair& pair, const Problem& p);

}  // namespace mpspec
