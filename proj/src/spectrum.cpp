#include "mpspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mpspec/nodal.hpp"
#include "mpspec/ode.hpp"

namespace mpspec {

namespace {

const double kPi = 3.14159265358979323846;

double fold_2pi(double th) {
  th = std::fmod(th, 2.0 * kPi);
  if (th < 0.0) th += 2.0 * kPi;
  return th;
}

struct WeightRange {
  double rmin = 0.0, rmax = 0.0;
};

WeightRange weight_range(const Coefficient& r, int grid = 2001) {
  WeightRange w{HUGE_VAL, -HUGE_VAL};
  for (int j = 0; j <= grid; ++j) {
    double v = r.value(-1.0 + 2.0 * j / grid);
    w.rmin = std::min(w.rmin, v);
    w.rmax = std::max(w.rmax, v);
  }
  return w;
}

// sign crossings of component 0 strictly inside (-1,1); exact-zero samples
// are skipped so a crossing is still seen by the flanking signs
int interior_zero_count(const Trajectory& t, double lam, double rmax) {
  int per_zero = static_cast<int>(
      std::ceil(2.0 * std::sqrt(std::max(lam, 0.0) * rmax) / kPi));
  int n = std::max(2048, 48 * per_zero);
  double prev = 0.0;
  bool have = false;
  int count = 0;
  for (int j = 1; j < n; ++j) {
    double u = t.value(-1.0 + 2.0 * j / n, 0);
    if (u == 0.0) continue;
    if (have && u * prev < 0.0) ++count;
    prev = u;
    have = true;
  }
  return count;
}

double theta_from_data(Family fam, double lam, double r0, double u0, double up0) {
  if (fam == Family::energy) return std::atan2(std::sqrt(lam * r0) * u0, up0);
  return std::atan2(u0, up0);
}

JacobianValue build_jacobian(const GammaValue& gm, const GammaValue& gp) {
  JacobianValue j;
  j.entries[0][0] = gm.d_lambda;
  j.entries[0][1] = gm.d_theta;
  j.entries[1][0] = gp.d_lambda;
  j.entries[1][1] = gp.d_theta;
  j.det = gm.d_lambda * gp.d_theta - gm.d_theta * gp.d_lambda;
  return j;
}

struct CorrectorOut {
  VariationalTrajectory vt;
  JacobianValue J;
  double res = HUGE_VAL;
};

enum class CorrStatus { converged, diverged, degenerate };

// Newton on (Gamma^-, Gamma^+) = 0 in (lambda, theta). Convergence is
// measured against sup|w|; the boundary functionals carry Hermite dense
// output noise at eta points, so the target sits just above that floor.
CorrStatus newton_correct(const Problem& q, Family fam, double& lam, double& th,
                          CorrectorOut& out) {
  const double itol = 1e-12;
  const double lam0 = lam, th0 = th;
  for (int it = 0; it < 20; ++it) {
    if (fam == Family::energy && !(lam > 1e-10)) return CorrStatus::diverged;
    VariationalTrajectory vt;
    try {
      vt = integrate_variational(q.r, lam, th, fam, itol);
    } catch (const std::exception&) {
      return CorrStatus::diverged;
    }
    GammaValue gm = gamma_side(q, vt, -1);
    GammaValue gp = gamma_side(q, vt, +1);
    JacobianValue J = build_jacobian(gm, gp);
    double scale = std::max(vt.sup_w, 1e-300);
    double res = std::max(std::fabs(gm.value), std::fabs(gp.value)) / scale;
    if (res <= 1e-9) {
      out.vt = std::move(vt);
      out.J = J;
      out.res = res;
      return CorrStatus::converged;
    }
    if (J.normalized() < 1e-12) return CorrStatus::degenerate;
    double dl = -(J.entries[1][1] * gm.value - J.entries[0][1] * gp.value) / J.det;
    double dth = -(-J.entries[1][0] * gm.value + J.entries[0][0] * gp.value) / J.det;
    // a stalled iteration at small residual is the dense-output noise floor
    if (std::fabs(dl) < 5e-12 * (1.0 + std::fabs(lam)) && std::fabs(dth) < 5e-12 &&
        res < 5e-9) {
      out.vt = std::move(vt);
      out.J = J;
      out.res = res;
      return CorrStatus::converged;
    }
    // trust region keeps the corrector from vaulting onto a neighboring branch
    double cap_l = 0.35 * (1.0 + std::fabs(lam));
    if (std::fabs(dl) > cap_l) {
      dth *= cap_l / std::fabs(dl);
      dl = std::copysign(cap_l, dl);
    }
    if (std::fabs(dth) > 0.5) {
      dl *= 0.5 / std::fabs(dth);
      dth = std::copysign(0.5, dth);
    }
    lam += dl;
    th += dth;
    if (std::fabs(lam - lam0) > 0.9 * (1.0 + std::fabs(lam0))) return CorrStatus::diverged;
    if (std::fabs(th - th0) > 1.8) return CorrStatus::diverged;
  }
  return CorrStatus::diverged;
}

Eigenpair finish_pair(const Problem& p, int k, double lam, double th, Family fam) {
  const double itol = 1e-12;
  VariationalTrajectory vt = integrate_variational(p.r, lam, th, fam, itol);
  auto classify_vt = [&](const VariationalTrajectory& v) {
    auto upp = [&p, lam, &v](double x) { return -lam * p.r.value(x) * v.w(x); };
    return classify(v.traj, 0, 1, upp);
  };
  NodalResult nr = classify_vt(vt);
  if (nr.ok() && nr.cls->nu < 0) {
    // flip to the positive representative: w(theta + pi) = -w(theta)
    th = fold_2pi(th + kPi);
    vt = integrate_variational(p.r, lam, th, fam, itol);
    nr = classify_vt(vt);
  }
  GammaValue gm = gamma_side(p, vt, -1);
  GammaValue gp = gamma_side(p, vt, +1);
  Eigenpair ep;
  ep.k = k;
  ep.lambda = lam;
  ep.theta = fold_2pi(th);
  ep.family = fam;
  ep.eigfun = vt.traj;
  ep.jacobian = build_jacobian(gm, gp);
  double scale = std::max(vt.sup_w, 1e-300);
  ep.certificates.simple = ep.jacobian.normalized() > 1e-8;
  ep.certificates.residual_minus = std::fabs(gm.value) / scale;
  ep.certificates.residual_plus = std::fabs(gp.value) / scale;
  ep.certificates.nodal_class = nr.ok() ? nr.cls->name() : std::string();
  return ep;
}

// eigenpair at a scan root: theta comes from the null vector of the
// boundary matrix, i.e. the initial data of the eigenfunction at x = 0
Eigenpair pair_from_scan_root(const Problem& p, int k, double lam,
                              bool degenerate_hint = false) {
  Family fam = lam >= 1.0 ? Family::energy : Family::slope;
  if (degenerate_hint) {
    // At an even-order root the boundary matrix is zero to noise level and
    // its null vector carries no direction. Every direction is then an
    // eigenfunction; pick the one whose Jacobian rows are best conditioned
    // so the simplicity certificate is not read off a degenerate scale.
    double best = -1.0, th_best = 0.0;
    for (int j = 0; j < 8; ++j) {
      double th = kPi * j / 8.0;
      JacobianValue J = jacobian(p, lam, th, fam, 1e-12);
      double prod = std::hypot(J.entries[0][0], J.entries[0][1]) *
                    std::hypot(J.entries[1][0], J.entries[1][1]);
      if (prod > best) {
        best = prod;
        th_best = th;
      }
    }
    return finish_pair(p, k, lam, th_best, fam);
  }
  BoundaryMatrix M = boundary_matrix(p, lam, 1e-12);
  double n0 = std::hypot(M.m[0][0], M.m[0][1]);
  double n1 = std::hypot(M.m[1][0], M.m[1][1]);
  double a, b;
  if (n0 >= n1) {
    a = M.m[0][1];
    b = -M.m[0][0];
  } else {
    a = M.m[1][1];
    b = -M.m[1][0];
  }
  if (std::hypot(a, b) < 1e-300) {
    a = 1.0;
    b = 0.0;
  }
  double th = fold_2pi(theta_from_data(fam, lam, p.r.value(0.0), a, b));
  return finish_pair(p, k, lam, th, fam);
}

struct RootScan {
  std::vector<double> roots;
  bool complete = false;
};

// First K positive roots of f(lambda), scanned uniformly in s = sqrt(lambda).
// The grid step resolves the Sturm spacing pi / (2 sqrt(r_max)) several times
// over, so consecutive simple roots cannot share a cell.
RootScan scan_positive_roots(const std::function<double(double)>& f, int K,
                             const WeightRange& wr, double per_gap = 6.0) {
  RootScan out;
  double ds = kPi / (per_gap * std::sqrt(wr.rmax));
  double s_cap = (K + 2) * kPi / std::sqrt(wr.rmin) + 5.0;
  double s_prev = 0.0, f_prev = 0.0;
  for (int j = 1; static_cast<int>(out.roots.size()) < K; ++j) {
    double s = j * ds;
    if (s > s_cap) return out;
    double fv = f(s * s);
    if (fv == 0.0) {
      out.roots.push_back(s * s);
    } else if (f_prev != 0.0 && f_prev * fv < 0.0) {
      double mid = 0.5 * (s_prev + s);
      out.roots.push_back(brent_root(f, s_prev * s_prev, s * s, f_prev, fv,
                                     1e-12 * (1.0 + mid * mid)));
    }
    s_prev = s;
    f_prev = fv;
  }
  out.complete = true;
  return out;
}

double apply_plus(const Trajectory& t, const MultiPointCondition& mp) {
  double v = t.value(1.0, 0);
  for (std::size_t i = 0; i < mp.alphas.size(); ++i)
    v -= mp.alphas[i] * t.value(mp.etas[i], 0);
  return v;
}

}  // namespace

std::vector<DirichletPair> dirichlet_spectrum(const Coefficient& r, int K) {
  if (K < 1) throw std::invalid_argument("dirichlet_spectrum: K must be >= 1");
  WeightRange wr = weight_range(r);
  if (!(wr.rmin > 0.0))
    throw std::domain_error("dirichlet_spectrum: weight must be strictly positive");
  auto shoot = [&](double lam) {
    return integrate_solution(r, lam, {0.0, 1.0}, -1.0, 1.0, 1e-11);
  };
  auto zcount = [&](double lam) {
    Trajectory t = shoot(lam);
    return interior_zero_count(t, lam, wr.rmax);
  };
  auto psi = [&](double lam) { return shoot(lam).value(1.0, 0); };

  double hi = 1.0;
  for (int it = 0; zcount(hi) < K; ++it) {
    if (it > 60) throw std::runtime_error("dirichlet_spectrum: upper bracket blew up");
    hi *= 2.0;
  }

  std::vector<DirichletPair> out;
  double prev = 0.0;
  for (int k = 1; k <= K; ++k) {
    // oscillation-count bisection isolates the k-th eigenvalue: the interior
    // zero count steps from k-1 to k exactly when a node enters through x=1
    double a = prev, b = hi;
    for (int it = 0; it < 34 && (b - a) > 1e-10 * (1.0 + b); ++it) {
      double m = 0.5 * (a + b);
      (zcount(m) >= k ? b : a) = m;
    }
    double fa = psi(a), fb = psi(b);
    int grow = 0;
    while (fa * fb > 0.0) {
      // a node hugging x = 1 can fool the sampled count by one; widen until
      // the endpoint value changes sign
      if (++grow > 80)
        throw std::runtime_error("dirichlet_spectrum: bracket failure at k = " +
                                 std::to_string(k));
      double w = std::max(b - a, 1e-10 * (1.0 + b));
      if (grow % 2 == 1) {
        a = std::max(prev, a - w);
        fa = psi(a);
      } else {
        b = std::min(hi * 2.0, b + w);
        fb = psi(b);
      }
    }
    double root;
    if (fa == 0.0)
      root = a;
    else if (fb == 0.0)
      root = b;
    else
      root = brent_root(psi, a, b, fa, fb, 1e-13 * (1.0 + b));

    Trajectory t = shoot(root);
    auto upp = [&](double x) { return -root * r.value(x) * t.value(x, 0); };
    NodalResult nr = classify(t, 0, 1, upp);
    if (!nr.ok() || nr.cls->k != k || nr.cls->nu != +1)
      throw std::runtime_error(
          "dirichlet_spectrum: eigenfunction confirmation failed at k = " +
          std::to_string(k));
    Family fam = root >= 1.0 ? Family::energy : Family::slope;
    double th = fold_2pi(
        theta_from_data(fam, root, r.value(0.0), t.value(0.0, 0), t.value(0.0, 1)));
    out.push_back({k, root, th, fam});
    prev = root;
  }
  return out;
}

Eigenpair continue_eigenpair(const Problem& p, const DirichletPair& baseline, int k) {
  if (p.separated_minus())
    throw std::invalid_argument(
        "continue_eigenpair: needs multi-point conditions on both sides");
  Family fam = baseline.family;
  Problem work = p;
  const MultiPointCondition& tm = p.mp_minus();
  const MultiPointCondition& tp = p.mp_plus();
  auto set_scale = [&](double t) {
    auto& wm = std::get<MultiPointCondition>(work.spec.bc_minus);
    for (std::size_t i = 0; i < tm.alphas.size(); ++i) wm.alphas[i] = t * tm.alphas[i];
    for (std::size_t i = 0; i < tp.alphas.size(); ++i)
      work.spec.bc_plus.alphas[i] = t * tp.alphas[i];
  };

  double lam = baseline.lambda, th = baseline.theta;

  // polish so the path starts on the zero set of the alpha = 0 problem
  set_scale(0.0);
  {
    double l2 = lam, t2 = th;
    CorrectorOut out;
    if (newton_correct(work, fam, l2, t2, out) == CorrStatus::converged) {
      lam = l2;
      th = t2;
    }
  }

  double t = 0.0, dt = 0.1;
  std::string last_fail = "corrector divergence";
  while (t < 1.0 - 1e-14) {
    double tn = std::min(1.0, t + dt);
    set_scale(tn);
    double l2 = lam, t2 = th;
    CorrectorOut out;
    CorrStatus st = newton_correct(work, fam, l2, t2, out);
    bool accepted = false;
    if (st == CorrStatus::converged) {
      if (out.J.normalized() < 1e-8) {
        std::ostringstream msg;
        msg << "degenerate Jacobian (scaled |det| = " << out.J.normalized()
            << ") at t = " << tn << ", lambda = " << l2 << ", theta = " << t2;
        throw ContinuationError(msg.str(), tn, l2, t2);
      }
      auto upp = [&](double x) { return -l2 * work.r.value(x) * out.vt.w(x); };
      NodalResult nr = classify(out.vt.traj, 0, 1, upp);
      if (nr.ok() && nr.cls->k == k)
        accepted = true;
      else
        last_fail = "nodal class changed";
    } else if (st == CorrStatus::degenerate) {
      last_fail = "degenerate Jacobian during correction";
    } else {
      last_fail = "corrector divergence";
    }
    if (accepted) {
      t = tn;
      lam = l2;
      th = t2;
      dt = std::min(0.1, dt * 1.5);
    } else {
      dt *= 0.5;
      if (dt < 1e-4) {
        std::ostringstream msg;
        msg << last_fail << " at t = " << tn << " (step floor reached), lambda = " << lam
            << ", theta = " << th;
        throw ContinuationError(msg.str(), tn, lam, th);
      }
    }
  }
  return finish_pair(p, k, lam, th, fam);
}

ScanResult scan_determinant(const Problem& p, double lambda_lo, double lambda_hi,
                            int grid) {
  if (!(lambda_lo < lambda_hi))
    throw std::invalid_argument("scan_determinant: window must have positive length");
  grid = std::max(grid, 8);
  const double tol = 1e-11;
  std::vector<double> lam(grid + 1), val(grid + 1);
  double scale = 0.0;
  for (int j = 0; j <= grid; ++j) {
    lam[j] = lambda_lo + (lambda_hi - lambda_lo) * j / grid;
    val[j] = characteristic_determinant(p, lam[j], tol);
    scale = std::max(scale, std::fabs(val[j]));
  }
  scale = std::max(scale, 1e-300);
  auto D = [&](double l) { return characteristic_determinant(p, l, tol); };

  ScanResult out;
  for (int j = 0; j <= grid; ++j) {
    if (val[j] == 0.0) {
      out.brackets.emplace_back(lam[j], lam[j]);
      out.roots.push_back(lam[j]);
      continue;
    }
    if (j < grid && val[j + 1] != 0.0 && val[j] * val[j + 1] < 0.0) {
      out.brackets.emplace_back(lam[j], lam[j + 1]);
      double mid = 0.5 * (lam[j] + lam[j + 1]);
      out.roots.push_back(brent_root(D, lam[j], lam[j + 1], val[j], val[j + 1],
                                     1e-10 * std::max(1.0, std::fabs(mid))));
    }
  }

  // An even-order root sits at a flat quadratic bottom of |D|, where a
  // minimizer drifts at the noise scale. The centered slope of D crosses
  // zero linearly there, so bisecting it pins the root far more tightly.
  auto polish_even = [&](double lstar) {
    double s = 1.0 + std::fabs(lstar);
    double h = 1e-6 * s;
    auto slope = [&](double l) { return D(l + h) - D(l - h); };
    double a = lstar - 1e-4 * s, b = lstar + 1e-4 * s;
    double fa = slope(a), fb = slope(b);
    if (fa == 0.0 || fb == 0.0 || fa * fb > 0.0) return lstar;
    for (int it = 0; it < 60 && (b - a) > 1e-13 * s; ++it) {
      double m = 0.5 * (a + b), fm = slope(m);
      if (fm == 0.0) return m;
      if (fa * fm < 0.0) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
    }
    return 0.5 * (a + b);
  };

  // A double root whose bottom grazes zero can read as two sign changes a
  // hair apart; collapse such a pair into one even-order candidate.
  for (std::size_t i = 0; i + 1 < out.roots.size();) {
    double a = out.roots[i], b = out.roots[i + 1];
    if (std::fabs(b - a) < 1e-8 * (1.0 + std::fabs(a))) {
      double lstar = polish_even(0.5 * (a + b));
      if (std::fabs(D(lstar)) < 1e-8 * scale) {
        out.even_candidates.push_back(lstar);
        out.roots.erase(out.roots.begin() + i, out.roots.begin() + i + 2);
        continue;
      }
    }
    ++i;
  }

  // even-order roots: |D| dips toward zero without a sign change
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int j = 1; j < grid; ++j) {
    bool local_min =
        std::fabs(val[j]) < std::fabs(val[j - 1]) && std::fabs(val[j]) <= std::fabs(val[j + 1]);
    bool sign_change = val[j] == 0.0 || val[j - 1] * val[j] < 0.0 ||
                       val[j] * val[j + 1] < 0.0;
    if (!local_min || sign_change) continue;
    if (std::fabs(val[j]) > 1e-4 * scale) continue;
    double a = lam[j - 1], b = lam[j + 1];
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = std::fabs(D(x1)), f2 = std::fabs(D(x2));
    for (int it = 0; it < 60 && (b - a) > 1e-10 * std::max(1.0, std::fabs(b)); ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = std::fabs(D(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = std::fabs(D(x2));
      }
    }
    double lstar = polish_even(0.5 * (a + b));
    if (std::fabs(D(lstar)) < 1e-8 * scale) out.even_candidates.push_back(lstar);
  }
  std::sort(out.even_candidates.begin(), out.even_candidates.end());
  return out;
}

namespace {

void separated_path(const Problem& p, int K, SpectrumResult& out) {
  const SeparatedCondition& sep = p.sep_minus();
  const MultiPointCondition& mp = p.mp_plus();
  WeightRange wr = weight_range(p.r);
  auto shoot = [&](double lam) {
    return integrate_solution(p.r, lam, {sep.c1, -sep.c0}, -1.0, 1.0, 1e-12);
  };
  auto phi = [&](double lam) { return apply_plus(shoot(lam), mp); };
  RootScan rs = scan_positive_roots(phi, K, wr);
  if (!rs.complete)
    out.warnings.push_back("separated scan found only " +
                           std::to_string(rs.roots.size()) + " of " +
                           std::to_string(K) + " eigenvalues");
  for (int k = 1; k <= static_cast<int>(rs.roots.size()); ++k) {
    double lam = rs.roots[k - 1];
    Trajectory t = shoot(lam);
    Family fam = lam >= 1.0 ? Family::energy : Family::slope;
    double th = fold_2pi(theta_from_data(fam, lam, p.r.value(0.0), t.value(0.0, 0),
                                         t.value(0.0, 1)));
    out.pairs.push_back(finish_pair(p, k, lam, th, fam));
  }
  out.method = "scan";
}

}  // namespace

SpectrumResult compute_spectrum(const Problem& p, int K) {
  if (K < 1) throw std::invalid_argument("compute_spectrum: K must be >= 1");
  SpectrumResult out;

  if (p.separated_minus()) {
    separated_path(p, K, out);
  } else {
    double anm = p.mp_minus().alpha_norm(), anp = p.mp_plus().alpha_norm();
    if (anm >= 1.0 || anp >= 1.0)
      out.warnings.push_back(
          "|alpha| >= 1 on at least one side: outside the guaranteed regime, "
          "attempting anyway");
    std::vector<DirichletPair> bases;
    try {
      bases = dirichlet_spectrum(p.r, K + 1);
    } catch (const std::exception& e) {
      out.warnings.push_back(std::string("baseline spectrum failed: ") + e.what());
      out.method = "continuation";
      return out;
    }
    bool any_cont = false, any_scan = false;
    for (int k = 1; k <= K; ++k) {
      try {
        out.pairs.push_back(continue_eigenpair(p, bases[k - 1], k));
        any_cont = true;
      } catch (const ContinuationError& e) {
        std::ostringstream w;
        w << "k = " << k << ": " << e.what() << "; falling back to determinant scan";
        out.warnings.push_back(w.str());
        double lam0 = bases[k - 1].lambda;
        double gap_lo = lam0 - (k >= 2 ? bases[k - 2].lambda : 0.0);
        double gap_hi = bases[k].lambda - lam0;
        double wlo = lam0 - 0.75 * gap_lo, whi = lam0 + 0.75 * gap_hi;
        ScanResult sc = scan_determinant(p, wlo, whi, 400);
        // pick the candidate closest to the baseline over both kinds; an
        // even-order dip right at lam0 beats a sign-change root further out
        double best = HUGE_VAL, pick = HUGE_VAL;
        bool pick_even = false;
        for (double x : sc.roots)
          if (std::fabs(x - lam0) < best) {
            best = std::fabs(x - lam0);
            pick = x;
            pick_even = false;
          }
        for (double x : sc.even_candidates)
          if (std::fabs(x - lam0) < best) {
            best = std::fabs(x - lam0);
            pick = x;
            pick_even = true;
          }
        if (best < HUGE_VAL) {
          if (pick_even) {
            std::ostringstream w2;
            w2 << "k = " << k << ": even-order root at lambda = " << pick
               << " (determinant dips without sign change)";
            out.warnings.push_back(w2.str());
          }
          out.pairs.push_back(pair_from_scan_root(p, k, pick, pick_even));
          any_scan = true;
        } else {
          std::ostringstream w2;
          w2 << "k = " << k << ": no root in the fallback window [" << wlo << ", "
             << whi << "]";
          out.warnings.push_back(w2.str());
        }
      }
    }
    out.method = any_cont && any_scan ? "both" : (any_scan ? "scan" : "continuation");
  }

  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const Eigenpair& a, const Eigenpair& b) { return a.lambda < b.lambda; });
  for (std::size_t i = 0; i + 1 < out.pairs.size(); ++i) {
    if (!(out.pairs[i + 1].lambda >
          out.pairs[i].lambda + 1e-12 * (1.0 + std::fabs(out.pairs[i].lambda)))) {
      std::ostringstream w;
      w << "eigenvalues not strictly increasing near lambda = " << out.pairs[i].lambda;
      out.warnings.push_back(w.str());
    }
  }
  // growth sanity by Sturm comparison: a solution in T_k has at most k+1
  // zeros, and any interval of length pi / sqrt(lambda r_min) holds one, so
  // lambda <= ((k+2) pi / 2)^2 / r_min (small multiplicative margin added)
  WeightRange wr = weight_range(p.r);
  double kappa = (kPi * kPi / 4.0) / wr.rmin * 1.01;
  for (const Eigenpair& ep : out.pairs) {
    double cap = kappa * double(ep.k + 2) * double(ep.k + 2);
    if (!ep.certificates.nodal_class.empty() && ep.lambda > cap) {
      std::ostringstream w;
      w << "lambda_" << ep.k << " = " << ep.lambda << " exceeds the growth bound "
        << cap;
      out.warnings.push_back(w.str());
    }
  }
  return out;
}

std::vector<double> separated_reference_spectrum(const Coefficient& r,
                                                 const SeparatedCondition& sep, int K) {
  if (K < 1)
    throw std::invalid_argument("separated_reference_spectrum: K must be >= 1");
  if (sep.c0 == 0.0 && sep.c1 == 0.0)
    throw std::invalid_argument("separated_reference_spectrum: zero condition");
  WeightRange wr = weight_range(r);
  if (!(wr.rmin > 0.0))
    throw std::domain_error("separated_reference_spectrum: weight must be positive");
  auto psi = [&](double lam) {
    return integrate_solution(r, lam, {sep.c1, -sep.c0}, -1.0, 1.0, 1e-12)
        .value(1.0, 1);
  };
  RootScan rs = scan_positive_roots(psi, K, wr);
  if (!rs.complete)
    throw std::runtime_error("separated_reference_spectrum: bracket failure after " +
                             std::to_string(rs.roots.size()) + " roots");
  return rs.roots;
}

InterlacingReport check_interlacing(const Problem& p, int K) {
  if (K < 1) throw std::invalid_argument("check_interlacing: K must be >= 1");
  if (!p.separated_minus())
    throw std::invalid_argument("check_interlacing: bc_minus must be separated");
  const SeparatedCondition& sep = p.sep_minus();
  InterlacingReport rep;
  rep.mu = separated_reference_spectrum(p.r, sep, K + 1);

  WeightRange wr = weight_range(p.r);
  const MultiPointCondition& mp = p.mp_plus();
  auto phi = [&](double lam) {
    return apply_plus(integrate_solution(p.r, lam, {sep.c1, -sep.c0}, -1.0, 1.0, 1e-12),
                      mp);
  };
  RootScan rs = scan_positive_roots(phi, K, wr, 8.0);
  if (!rs.complete)
    throw std::runtime_error("check_interlacing: found only " +
                             std::to_string(rs.roots.size()) + " of " +
                             std::to_string(K) + " eigenvalues");
  rep.lambda = rs.roots;

  bool neumann = (sep.c0 == 0.0);
  for (int k = 1; k <= K; ++k) {
    // in the Neumann case the excluded constant mode mu = 0 still acts as the
    // lower comparison value for k = 1
    double lo = neumann ? (k == 1 ? 0.0 : rep.mu[k - 2]) : rep.mu[k - 1];
    double hi = neumann ? rep.mu[k - 1] : rep.mu[k];
    double lam = rep.lambda[k - 1];
    if (!(lo < lam && lam < hi)) {
      std::ostringstream v;
      v << "k = " << k << ": lambda = " << lam << " outside (" << lo << ", " << hi
        << ")";
      rep.violations.push_back(v.str());
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

bool check_principal_positivity(const Eigenpair& pair, const Problem& p) {
  if (pair.k != 1)
    throw std::invalid_argument("check_principal_positivity: needs the principal pair");
  bool closed = !p.separated_minus() && p.mp_minus().alpha_norm() > 0.0 &&
                p.mp_plus().alpha_norm() > 0.0;
  const int n = 4096;
  int j0 = closed ? 0 : 1, j1 = closed ? n : n - 1;
  for (int j = j0; j <= j1; ++j) {
    double x = -1.0 + 2.0 * j / n;
    if (!(pair.eigfun.value(x, 0) > 0.0)) return false;
  }
  return true;
}

}  // namespace mpspec
