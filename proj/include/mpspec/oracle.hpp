// Brute-force spectral reference by second-order finite differences. The
// interval is cut into N+1 cells with interior unknowns u_1..u_N; the
// endpoint values are eliminated through the boundary conditions, with
// off-grid eta points entering by linear interpolation. That yields a dense
// (in practice nearly tridiagonal) N x N pencil A u = lambda B u with B the
// diagonal of r values, solved as a standard nonsymmetric eigenproblem.
//
// This path shares no code with the shooting solver: it is the independent
// cross-check, not a production solver. Second-order accuracy means
// eigenvalue errors of order lambda^2 h^2 / 12.
#pragma once

#include <string>
#include <vector>

#include "mpspec/problem.hpp"

namespace mpspec {

struct DiscreteSystem {
  int N = 0;
  std::vector<double> A;  // row-major N x N
  std::vector<double> B;  // diagonal entries r(x_j)
  std::vector<std::string> notes;
};

// Throws std::invalid_argument when the endpoint elimination is singular
// (possible only once |alpha| reaches 1).
DiscreteSystem discretize(const Problem& p, int N);

struct OracleResult {
  int N = 0;
  std::vector<double> eigenvalues;  // ascending, accepted-real only
  std::vector<std::string> warnings;
};

// The K smallest real eigenvalues of the discrete pencil.
OracleResult oracle_spectrum(const Problem& p, int N, int K);

// Number of discrete eigenvalues within cluster_tol * max(1,|lambda_star|)
// of lambda_star; the numerical stand-in for eigenvalue multiplicity.
int multiplicity_at(const Problem& p, double lambda_star, int N, double cluster_tol);

}  // namespace mpspec
