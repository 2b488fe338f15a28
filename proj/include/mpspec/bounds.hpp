// A-priori constants attached to a weight r and to a nonlinearity g, plus
// numerical verification of the identities and the energy envelope they rest
// on. Extrema of r and r' come from a dense grid with golden-section
// refinement between bracketing grid points; a multiplicative safety factor
// (default 1.001) is folded into the reported extrema in the conservative
// direction, so derived constants inherit it.
#pragma once

#include <optional>
#include <utility>

#include "mpspec/coefficient.hpp"
#include "mpspec/ivp.hpp"

namespace mpspec {

struct AprioriConstants {
  double r_min = 0.0, r_max = 0.0;
  double rp_pos_max = 0.0;  // max of max(r',0)
  double rp_neg_max = 0.0;  // max of max(-r',0)
  double c_min = 0.0, c_max = 0.0;
  double a1 = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double Lambda1 = 0.0, Lambda2 = 0.0, Lambda3 = 0.0;
  int grid = 0;
  double safety = 1.0;
};

AprioriConstants compute_constants(const Coefficient& r, int grid = 4001,
                                   double safety = 1.001);

struct EnvelopeReport {
  double c_min = 0.0, c_max = 0.0;
  double min_ratio = 0.0, max_ratio = 0.0;  // of E(x)/E(0)
  double max_violation = 0.0;               // relative excursion outside [c_min,c_max]
  int samples = 0;
};

// Checks c_min <= E(x)/E(0) <= c_max for the energy-family solution. The
// bound is attained for constant r, so the integration runs tight by default
// to keep interpolation noise out of the violation figure.
EnvelopeReport verify_energy_envelope(const Coefficient& r, double lambda, double theta,
                                      int samples = 2001, double tol = 1e-12);

struct IdentityReport {
  // residuals of w'(+-1) w_th(+-1) = (lambda r(0))^{1/2}
  double wwth_minus = 0.0, wwth_plus = 0.0;
  // residuals of w'(+-1) w_la(+-1) = int_0^{+-1} r w^2 - (1/2) lambda^{-1/2} r(0)^{1/2} sin th cos th
  double wwla_minus = 0.0, wwla_plus = 0.0;
  // sup over probe points of the Lagrange identity defect (holds for any x)
  double lagrange_max = 0.0;
  // |w(+-1)| relative to sup|w|; the wwth/wwla identities assume a Dirichlet pair
  double boundary_mismatch = 0.0;
  double max_residual() const;
};

IdentityReport verify_identities(const Coefficient& r, double lambda, double theta,
                                 Family family = Family::energy, double tol = 1e-10);

struct NonlinearConstants {
  double g_min = 0.0, g_max = 0.0;
  double C1 = 0.0;  // sup |g_x|
  double C2 = 0.0;  // sup |u g_u|
  double U = 0.0;   // sampled |u| range
  double R(double lam) const;        // max{1, 1/g_min} (C1 + C2 lam^{1/2})
  double gamma_lower(double lam) const;  // (g_min/g_max)^{1/2} exp(-R(lam))
  double Lambda_k(int k) const;      // ((k+2) pi/2)^2 / g_min
};

// Samples g on a uniform x-grid times a symmetric log-spaced u-grid.
// Declared limits of gtilde (product form) are folded into g_min/g_max.
NonlinearConstants nonlinear_constants(
    const Coefficient& g, double U = 1e3, int x_grid = 201, int u_grid = 401,
    std::optional<std::pair<double, double>> gtilde_limits = std::nullopt);

}  // namespace mpspec
