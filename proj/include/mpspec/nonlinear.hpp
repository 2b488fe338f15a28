// Nonlinear solves -u'' = f(x,u) and bifurcation branches of
// -u'' = lambda g(x,u) u under the multi-point boundary conditions.
//
// Discretization: second-order central differences on a uniform mesh,
// boundary rows eliminated against the multi-point (or separated) conditions,
// damped Newton on the resulting sparse system. Returned solution samples are
// Richardson-extrapolated from the fine and half-resolution meshes, so the
// sample accuracy is two orders better than the raw stencil; the reported
// residual is the fine-mesh collocation residual.
//
// Branch tracing is pseudo-arclength in (u, lambda) seeded by two
// amplitude-pinned solves near the bifurcation point; every accepted point
// must classify in the expected nodal class, and losing the class is a hard
// error that names the offending point rather than a silent continue.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpspec/nodal.hpp"
#include "mpspec/ode.hpp"
#include "mpspec/problem.hpp"

namespace mpspec {

// intervals of the uniform solve mesh; guesses address its nodes
inline constexpr int solve_mesh_intervals = 1024;

struct BVPSolution {
  double lambda = 1.0;     // multiplier on g; 1 for fixed-f solves
  Trajectory samples;      // component 0 = u, component 1 = u'
  double residual_inf = 0.0;  // max collocation residual on the fine mesh
  NodalResult nodal;
  std::vector<std::string> notes;  // hypothesis checks, regime tags
};

// Fixed nonlinearity -u'' = f(x,u) with the problem's boundary conditions.
// guess is either empty (zero start) or node values on the fine mesh
// (1025 entries). Reports, in notes, a scan of the asymptotic eigenvalues
// lambda_k(r_inf) for r_inf(x) = lim f(x,s)/s: solvability needs them away
// from 1, and a resonant slope is flagged rather than hidden. Throws
// std::runtime_error when Newton fails to converge.
BVPSolution solve_fixed(const Problem& p, const std::vector<double>& guess = {});

struct CrossingReport {
  double lambda_k_0 = 0.0;    // bifurcation point lambda_k(g(.,0))
  double lambda_k_inf = 0.0;  // asymptote lambda_k(g_inf)
  bool crosses = false;       // 1 strictly between the two
};

// Product form g = r(x)*gtilde(u) only: lambda_k_0 = lambda_k(r)/gtilde(0),
// lambda_k_inf = lambda_k(r)/gtilde(inf). crosses decides whether the branch
// for T_k must pass lambda = 1.
CrossingReport crossing_check(const Problem& p, int k);

enum class BranchStatus { reached_target, left_window, step_failure };
const char* to_string(BranchStatus s);

struct BranchPoint {
  double lambda = 0.0;
  double sup_norm = 0.0;
  std::vector<double> u;  // node values on the branch mesh
};

struct Branch {
  std::vector<BranchPoint> points;
  int k = 0;
  int nu = +1;
  double origin = 0.0;  // continuum bifurcation value lambda_k^0
  BranchStatus status = BranchStatus::step_failure;
  std::vector<std::string> notes;
  std::vector<double> mesh;  // node abscissae for the point snapshots
};

// Raised when an accepted-looking corrector point falls out of T_k^nu; the
// fields name the offending point.
struct NodalClassLost : std::runtime_error {
  double lambda = 0.0;
  double sup_norm = 0.0;
  NodalClassLost(const std::string& msg, double lam, double sup)
      : std::runtime_error(msg), lambda(lam), sup_norm(sup) {}
};

// Traces the T_k^nu branch of -u'' = lambda g(x,u) u from the bifurcation
// point lambda_k^0 (computed from the weight g(.,0)). Stops when lambda
// crosses target_lambda (the crossing point is polished at exactly that
// lambda), when it leaves [window.first, window.second], or when the
// corrector fails at the minimum step. max_points and sup_cap are safety
// valves for branches with no reachable stop condition (a vertical eigenline,
// say); hitting one ends the trace as step_failure with a note naming the
// cap. Throws NodalClassLost as documented above and std::runtime_error on
// startup failure.
Branch branch_continue(const Problem& p, int k, int nu,
                       std::pair<double, double> lambda_window,
                       double target_lambda, int max_points = 1500,
                       double sup_cap = 1e4);

// Solution of -u'' = g(x,u) u in T_k^nu via branch_continue to lambda = 1
// plus a final Newton polish. Requires crossing_check(p,k).crosses; refuses
// with the two asymptotic values in the message otherwise.
BVPSolution find_nodal_solution(const Problem& p, int k, int nu);

// CSV exports: branch rows are lambda,sup_norm,k,nu; solution rows are x,u.
void write_branch_csv(const Branch& b, const std::string& path);
void write_solution_csv(const BVPSolution& s, const std::string& path);

}  // namespace mpspec
