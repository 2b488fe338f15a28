// Nodal classification. A function u on [-1,1] belongs to T_k (sign nu) when
//   (a) u'(-1) != 0 and u'(1) != 0, with nu = sign u'(-1),
//   (b) u' has exactly k zeros in (-1,1), all simple,
//   (c) u changes sign strictly between each consecutive pair of those zeros.
// Counting zeros of u' instead of zeros of u is what keeps the classes
// pairwise disjoint under multi-point boundary conditions; node counting
// proper can lump distinct eigenfunctions together.
//
// The decision is scale-free: simplicity asks |u''(x0)| > tol_simple * max|u''|
// and the boundary condition asks |u'(+-1)| > tol_boundary * max|u'|. The
// u'' values come from a caller-supplied hint (for -u'' = lambda r u pass
// x -> -lambda r(x) u(x); collocation solutions know their own residual form).
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpspec/ode.hpp"

namespace mpspec {

struct NodalClass {
  int k = 0;
  int nu = +1;
  std::vector<double> zeros_of_up;
  std::vector<double> sign_changes_of_u;
  std::string name() const;  // "T_2^-" style
};

enum class NotNodalReason {
  none,
  boundary_derivative_zero,
  non_simple_zero,
  missing_interior_sign_change,
  no_zeros,
};
const char* to_string(NotNodalReason r);

struct NodalResult {
  std::optional<NodalClass> cls;
  NotNodalReason reason = NotNodalReason::none;
  bool ok() const { return cls.has_value(); }
};

struct NodalOptions {
  int scan = 4096;
  double tol_simple = 1e-6;
  double tol_boundary = 1e-8;
};

// curve fills (u, u') at x in [-1,1]
using CurveSampler = std::function<void(double x, double& u, double& up)>;

NodalResult classify(const CurveSampler& curve,
                     const std::function<double(double)>& upp_hint,
                     const NodalOptions& opt = {});

// trajectory components cu = u and cup = u'
NodalResult classify(const Trajectory& t, int cu, int cup,
                     const std::function<double(double)>& upp_hint,
                     const NodalOptions& opt = {});

// number of u'-zeros in (-1,1) with no simplicity certification
int oscillation_count(const CurveSampler& curve, int scan = 4096);
int oscillation_count(const Trajectory& t, int cu, int cup, int scan = 4096);

}  // namespace mpspec
