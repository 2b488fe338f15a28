#include "mpspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mpspec {

namespace {

// golden-section maximization of fn on [lo,hi]
double golden_max(const std::function<double(double)>& fn, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 80 && (b - a) > 1e-13 * (1 + std::fabs(a) + std::fabs(b)); ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return std::max(fc, fd);
}

// max of fn over [-1,1]: dense grid plus refinement around each local best
double grid_max(const std::function<double(double)>& fn, int grid) {
  double best = -1e300;
  int best_i = 0;
  std::vector<double> vals(grid);
  for (int i = 0; i < grid; ++i) {
    double x = -1.0 + 2.0 * i / (grid - 1);
    vals[i] = fn(x);
    if (vals[i] > best) {
      best = vals[i];
      best_i = i;
    }
  }
  double h = 2.0 / (grid - 1);
  double lo = std::max(-1.0, -1.0 + best_i * h - h);
  double hi = std::min(1.0, -1.0 + best_i * h + h);
  return std::max(best, golden_max(fn, lo, hi));
}

}  // namespace

AprioriConstants compute_constants(const Coefficient& r, int grid, double safety) {
  AprioriConstants k;
  k.grid = grid;
  k.safety = safety;

  auto rv = [&r](double x) { return r.value(x); };
  auto rneg = [&r](double x) { return -r.value(x); };
  auto rp_pos = [&r](double x) { return std::max(r.derivative(x), 0.0); };
  auto rp_neg = [&r](double x) { return std::max(-r.derivative(x), 0.0); };

  k.r_max = grid_max(rv, grid) * safety;
  k.r_min = -grid_max(rneg, grid) / safety;
  k.rp_pos_max = grid_max(rp_pos, grid) * safety;
  k.rp_neg_max = grid_max(rp_neg, grid) * safety;
  if (!(k.r_min > 0.0))
    throw std::domain_error("constants need r > 0 on [-1,1]");

  k.c_min = std::min(std::exp(-2.0 * k.rp_pos_max / k.r_min),
                     std::exp(-2.0 * k.rp_neg_max / k.r_min));
  k.c_max = 1.0 / k.c_min;
  k.a1 = std::sqrt(k.r_min * k.c_min / (k.r_max * k.c_max));
  k.c1 = 0.25 * k.r_min * k.c_min;
  double q = 4.0 * k.r_max * k.c_max;
  k.Lambda1 = q * q / (k.r_min * k.r_min * k.r_min * k.c_min * k.c_min);
  k.Lambda2 = k.r_min * k.r_min / (4.0 * k.r_max * k.r_max * k.r_max * k.c_max * k.c_max);
  k.c2 = 3.0 * k.r_max * k.r_max * std::pow(k.c_max / k.r_min, 1.5);
  k.c3 = 3.0 * k.r_max * k.r_max * std::pow(k.c_max, 1.5) / k.r_min;
  k.Lambda3 = std::max(0.25 * k.r_max / (k.c1 * k.c1), k.Lambda1);
  k.c4 = std::sqrt(k.r_max * k.c_max) * (k.c2 + k.c3 / std::sqrt(k.r_min));
  return k;
}

EnvelopeReport verify_energy_envelope(const Coefficient& r, double lambda, double theta,
                                      int samples, double tol) {
  AprioriConstants k = compute_constants(r);
  VariationalTrajectory vt = integrate_variational(r, lambda, theta, Family::energy, tol);

  double e0 = lambda * r.value(0.0);
  EnvelopeReport rep;
  rep.c_min = k.c_min;
  rep.c_max = k.c_max;
  rep.samples = samples;
  rep.min_ratio = 1e300;
  rep.max_ratio = -1e300;
  double y[7];
  for (int i = 0; i < samples; ++i) {
    double x = -1.0 + 2.0 * i / (samples - 1);
    vt.traj.sample(x, y);
    double e = y[1] * y[1] + lambda * r.value(x) * y[0] * y[0];
    double ratio = e / e0;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.max_violation = std::max({0.0, (rep.c_min - rep.min_ratio) / rep.c_min,
                                (rep.max_ratio - rep.c_max) / rep.c_max});
  return rep;
}

double IdentityReport::max_residual() const {
  return std::max({std::fabs(wwth_minus), std::fabs(wwth_plus), std::fabs(wwla_minus),
                   std::fabs(wwla_plus), std::fabs(lagrange_max)});
}

IdentityReport verify_identities(const Coefficient& r, double lambda, double theta,
                                 Family family, double tol) {
  VariationalTrajectory vt = integrate_variational(r, lambda, theta, family, tol);
  IdentityReport rep;

  double r0 = r.value(0.0);
  double st = std::sin(theta), ct = std::cos(theta);
  // for the slope family the same computation gives w'(+-1) w_th(+-1) = 1
  // and drops the constant term in the integral identity
  double mu = family == Family::energy ? std::sqrt(lambda * r0) : 1.0;
  double la_const = family == Family::energy ? 0.5 * std::sqrt(r0 / lambda) * st * ct : 0.0;
  // [w' w_la - w w_la'](0) from the family initial data
  double f_at_0 = -la_const;

  double y[7];
  double lag = 0.0;
  for (int i = 0; i <= 40; ++i) {
    double x = -1.0 + 2.0 * i / 40.0;
    vt.traj.sample(x, y);
    double wron = y[1] * y[4] - y[0] * y[5];
    lag = std::max(lag, std::fabs(y[6] - (wron - f_at_0)));
  }
  rep.lagrange_max = lag;

  double sup = std::max(vt.sup_w, 1e-300);
  vt.traj.sample(-1.0, y);
  double wm = y[0];
  rep.wwth_minus = y[1] * y[2] - mu;
  rep.wwla_minus = y[1] * y[4] - (y[6] - la_const);
  vt.traj.sample(1.0, y);
  rep.wwth_plus = y[1] * y[2] - mu;
  rep.wwla_plus = y[1] * y[4] - (y[6] - la_const);
  rep.boundary_mismatch = std::max(std::fabs(wm), std::fabs(y[0])) / sup;
  return rep;
}

double NonlinearConstants::R(double lam) const {
  return std::max(1.0, 1.0 / g_min) * (C1 + C2 * std::sqrt(lam));
}

double NonlinearConstants::gamma_lower(double lam) const {
  return std::sqrt(g_min / g_max) * std::exp(-R(lam));
}

double NonlinearConstants::Lambda_k(int k) const {
  double s = (k + 2) * 3.14159265358979323846 / 2.0;
  return s * s / g_min;
}

NonlinearConstants nonlinear_constants(const Coefficient& g, double U, int x_grid,
                                       int u_grid,
                                       std::optional<std::pair<double, double>> limits) {
  NonlinearConstants nc;
  nc.U = U;
  nc.g_min = 1e300;
  nc.g_max = -1e300;

  // symmetric log-spaced u samples: 0 and +-10^t
  std::vector<double> us;
  us.push_back(0.0);
  int half = (u_grid - 1) / 2;
  for (int i = 0; i < half; ++i) {
    double t = -6.0 + (std::log10(U) + 6.0) * i / (half - 1);
    double u = std::pow(10.0, t);
    us.push_back(u);
    us.push_back(-u);
  }

  for (int i = 0; i < x_grid; ++i) {
    double x = -1.0 + 2.0 * i / (x_grid - 1);
    for (double u : us) {
      double v = g.value2(x, u);
      nc.g_min = std::min(nc.g_min, v);
      nc.g_max = std::max(nc.g_max, v);
      nc.C1 = std::max(nc.C1, std::fabs(g.dx(x, u)));
      nc.C2 = std::max(nc.C2, std::fabs(u * g.du(x, u)));
    }
  }
  if (limits) {
    nc.g_min = std::min({nc.g_min, limits->first, limits->second});
    nc.g_max = std::max({nc.g_max, limits->first, limits->second});
  }
  return nc;
}

}  // namespace mpspec
