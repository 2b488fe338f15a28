#include "mpspec/nonlinear.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mpspec/bounds.hpp"
#include "mpspec/spectrum.hpp"

namespace mpspec {

namespace {

const double kPi = 3.14159265358979323846;

constexpr int kFineM = solve_mesh_intervals;
constexpr int kCoarseM = kFineM / 2;  // half resolution for the extrapolated samples

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

std::vector<double> mesh_nodes(int M) {
  std::vector<double> x(M + 1);
  for (int j = 0; j <= M; ++j) x[j] = -1.0 + 2.0 * j / M;
  x[M] = 1.0;
  return x;
}

// cubic Lagrange stencil for u(eta); fourth order keeps the eta sampling
// error out of the h^2 expansion that the two-mesh extrapolation removes
void add_eta_stencil(std::vector<double>& row, double coef, double eta, int M) {
  double h = 2.0 / M;
  double t = (eta + 1.0) / h;
  int j = std::clamp(static_cast<int>(std::floor(t)), 0, M - 1);
  int base = std::clamp(j - 1, 0, M - 3);
  double s = t - base;
  double w[4];
  w[0] = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  w[1] = s * (s - 2.0) * (s - 3.0) / 2.0;
  w[2] = -s * (s - 1.0) * (s - 3.0) / 2.0;
  w[3] = s * (s - 1.0) * (s - 2.0) / 6.0;
  for (int m = 0; m < 4; ++m) row[base + m] += coef * w[m];
}

// endpoint values as sparse combinations of the interior unknowns u_1..u_{M-1}
struct BoundaryElim {
  std::vector<std::pair<int, double>> e0, eM;  // (node index, weight)
};

BoundaryElim eliminate_boundary(const Problem& p, int M) {
  double h = 2.0 / M;
  std::vector<double> rm(M + 1, 0.0), rp(M + 1, 0.0);
  if (p.separated_minus()) {
    const SeparatedCondition& s = p.sep_minus();
    rm[0] = s.c0 - 3.0 * s.c1 / (2.0 * h);
    rm[1] = 4.0 * s.c1 / (2.0 * h);
    rm[2] = -s.c1 / (2.0 * h);
  } else {
    const MultiPointCondition& mc = p.mp_minus();
    rm[0] = 1.0;
    for (std::size_t i = 0; i < mc.alphas.size(); ++i)
      add_eta_stencil(rm, -mc.alphas[i], mc.etas[i], M);
  }
  {
    const MultiPointCondition& mc = p.mp_plus();
    rp[M] = 1.0;
    for (std::size_t i = 0; i < mc.alphas.size(); ++i)
      add_eta_stencil(rp, -mc.alphas[i], mc.etas[i], M);
  }
  double a = rm[0], b = rm[M], c = rp[0], d = rp[M];
  double det = a * d - b * c;
  double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c), std::fabs(d), 1e-30});
  if (std::fabs(det) < 1e-10 * scale * scale)
    throw std::invalid_argument(
        "boundary elimination is singular; the alpha sums sit too close to 1");
  BoundaryElim be;
  for (int j = 1; j < M; ++j) {
    double q1 = -rm[j], q2 = -rp[j];
    double u0 = (d * q1 - b * q2) / det;
    double uM = (-c * q1 + a * q2) / det;
    if (u0 != 0.0) be.e0.push_back({j, u0});
    if (uM != 0.0) be.eM.push_back({j, uM});
  }
  return be;
}

// right-hand side of -u'' = rhs: lambda*g(x,u)*u for branch work, f(x,u)
// for fixed solves
struct RhsForm {
  const Coefficient* g = nullptr;
  const Coefficient* f = nullptr;
  double value(double lam, double x, double u) const {
    if (g) return lam * g->value2(x, u) * u;
    return f->value2(x, u);
  }
  double del_u(double lam, double x, double u) const {
    if (g) return lam * (g->value2(x, u) + u * g->du(x, u));
    return f->du(x, u);
  }
  double del_lam(double x, double u) const { return g ? g->value2(x, u) * u : 0.0; }
};

struct Collocation {
  int M = 0;
  double h = 0.0;
  std::vector<double> x;
  BoundaryElim be;
};

Collocation make_collocation(const Problem& p, int M) {
  Collocation c;
  c.M = M;
  c.h = 2.0 / M;
  c.x = mesh_nodes(M);
  c.be = eliminate_boundary(p, M);
  return c;
}

std::vector<double> full_values(const Collocation& c, const std::vector<double>& v) {
  std::vector<double> full(c.M + 1, 0.0);
  for (int j = 1; j < c.M; ++j) full[j] = v[j - 1];
  for (const auto& [j, w] : c.be.e0) full[0] += w * v[j - 1];
  for (const auto& [j, w] : c.be.eM) full[c.M] += w * v[j - 1];
  return full;
}

double sup_norm_of(const std::vector<double>& vals) {
  double s = 0.0;
  for (double u : vals) s = std::max(s, std::fabs(u));
  return s;
}

struct ResidualInfo {
  std::vector<double> F;
  double res_inf = 0.0;
  double rhs_scale = 0.0;
};

ResidualInfo residual(const Collocation& c, const RhsForm& rf, double lam,
                      const std::vector<double>& v) {
  std::vector<double> full = full_values(c, v);
  ResidualInfo out;
  out.F.resize(c.M - 1);
  double h2 = c.h * c.h;
  for (int j = 1; j < c.M; ++j) {
    double rhs = rf.value(lam, c.x[j], full[j]);
    out.F[j - 1] = (-full[j - 1] + 2.0 * full[j] - full[j + 1]) / h2 - rhs;
    out.res_inf = std::max(out.res_inf, std::fabs(out.F[j - 1]));
    out.rhs_scale = std::max(out.rhs_scale, std::fabs(rhs));
  }
  return out;
}

enum class Border { none, pin, arclength };

struct BorderSpec {
  Border mode = Border::none;
  // pin: h * sum phi_j u_j = target
  std::vector<double> phi;
  double target = 0.0;
  // arclength: (h/2) sum tu_j (u_j - up_j) / Au^2 + tl (lam - lp) / Al^2 = 0
  std::vector<double> tu;
  double tl = 0.0;
  std::vector<double> up;
  double lp = 0.0;
  double Au = 1.0, Al = 1.0;
};

double border_residual(const Collocation& c, const BorderSpec& b,
                       const std::vector<double>& v, double lam) {
  if (b.mode == Border::pin) {
    double s = 0.0;
    for (int j = 1; j < c.M; ++j) s += b.phi[j - 1] * v[j - 1];
    return c.h * s - b.target;
  }
  if (b.mode == Border::arclength) {
    double s = 0.0;
    for (int j = 1; j < c.M; ++j) s += b.tu[j - 1] * (v[j - 1] - b.up[j - 1]);
    return 0.5 * c.h * s / (b.Au * b.Au) + b.tl * (lam - b.lp) / (b.Al * b.Al);
  }
  return 0.0;
}

struct NewtonOut {
  std::vector<double> v;
  double lam = 0.0;
  double res_inf = 0.0;
  double rhs_scale = 0.0;
  int iters = 0;
  bool converged = false;
};

// damped Newton on the collocation system, optionally bordered by one pin or
// arclength row (then lambda joins the unknowns). The border rows are linear,
// so they are satisfied exactly after any full step; the line search tracks
// ||F||_inf plus the border residual.
NewtonOut newton_solve(const Collocation& c, const RhsForm& rf, std::vector<double> v,
                       double lam, const BorderSpec& b, int max_iters = 30) {
  const int n = c.M - 1;
  const bool bordered = b.mode != Border::none;
  const int dim = n + (bordered ? 1 : 0);
  const double h2 = c.h * c.h;
  const double eps = std::numeric_limits<double>::epsilon();

  auto tol_of = [&](const ResidualInfo& r, const std::vector<double>& vv) {
    // 1e-10 of the forcing scale plus the cancellation floor of the stencil
    double sup = sup_norm_of(vv);
    return 1e-10 * std::max(1.0, r.rhs_scale) + 64.0 * eps * (1.0 + sup) / h2;
  };
  auto btol_of = [&]() {
    return 1e-9 * (b.mode == Border::pin ? 1.0 + std::fabs(b.target) : 1.0);
  };

  ResidualInfo ri = residual(c, rf, lam, v);
  double bres = border_residual(c, b, v, lam);
  NewtonOut out;
  for (int it = 0; it < max_iters; ++it) {
    // a bordered predictor can land near the kernel with lambda still off,
    // so the convergence gate only opens after one corrector step
    if ((it > 0 || !bordered) && ri.res_inf <= tol_of(ri, v) &&
        std::fabs(bres) <= btol_of()) {
      out = {std::move(v), lam, ri.res_inf, ri.rhs_scale, it, true};
      return out;
    }
    std::vector<double> full = full_values(c, v);
    std::vector<Triplet> trips;
    trips.reserve(5 * static_cast<std::size_t>(n) + 32);
    for (int j = 1; j < c.M; ++j) {
      int row = j - 1;
      trips.emplace_back(row, row, 2.0 / h2 - rf.del_u(lam, c.x[j], full[j]));
      if (j - 1 >= 1) trips.emplace_back(row, j - 2, -1.0 / h2);
      if (j + 1 <= c.M - 1) trips.emplace_back(row, j, -1.0 / h2);
      if (j == 1)
        for (const auto& [jj, w] : c.be.e0) trips.emplace_back(row, jj - 1, -w / h2);
      if (j == c.M - 1)
        for (const auto& [jj, w] : c.be.eM) trips.emplace_back(row, jj - 1, -w / h2);
      if (bordered) {
        double dl = -rf.del_lam(c.x[j], full[j]);
        if (dl != 0.0) trips.emplace_back(row, n, dl);
      }
    }
    if (b.mode == Border::pin) {
      for (int j = 1; j < c.M; ++j)
        if (b.phi[j - 1] != 0.0) trips.emplace_back(n, j - 1, c.h * b.phi[j - 1]);
    } else if (b.mode == Border::arclength) {
      for (int j = 1; j < c.M; ++j)
        if (b.tu[j - 1] != 0.0)
          trips.emplace_back(n, j - 1, 0.5 * c.h * b.tu[j - 1] / (b.Au * b.Au));
      trips.emplace_back(n, n, b.tl / (b.Al * b.Al));
    }
    SpMat J(dim, dim);
    J.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      out = {std::move(v), lam, ri.res_inf, ri.rhs_scale, it + 1, false};
      return out;
    }
    Eigen::VectorXd rhsv(dim);
    for (int i = 0; i < n; ++i) rhsv[i] = -ri.F[i];
    if (bordered) rhsv[n] = -bres;
    Eigen::VectorXd dz = lu.solve(rhsv);

    double merit0 = ri.res_inf + std::fabs(bres);
    double t = 1.0;
    bool accepted = false;
    std::vector<double> v_try(n);
    double lam_try = lam;
    ResidualInfo ri_try;
    double bres_try = 0.0;
    for (int ls = 0; ls < 30; ++ls) {
      for (int i = 0; i < n; ++i) v_try[i] = v[i] + t * dz[i];
      lam_try = bordered ? lam + t * dz[n] : lam;
      ri_try = residual(c, rf, lam_try, v_try);
      bres_try = border_residual(c, b, v_try, lam_try);
      double merit = ri_try.res_inf + std::fabs(bres_try);
      if (merit <= (1.0 - 1e-4 * t) * merit0 || merit <= tol_of(ri_try, v_try)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      out = {std::move(v), lam, ri.res_inf, ri.rhs_scale, it + 1, false};
      return out;
    }
    v = std::move(v_try);
    lam = lam_try;
    ri = std::move(ri_try);
    bres = bres_try;
  }
  bool ok = ri.res_inf <= tol_of(ri, v) && std::fabs(bres) <= btol_of();
  out = {std::move(v), lam, ri.res_inf, ri.rhs_scale, max_iters, ok};
  return out;
}

// fourth-order first derivative on a uniform grid, one-sided at the edges
std::vector<double> derivative_values(const std::vector<double>& u, double h) {
  int n = static_cast<int>(u.size());
  std::vector<double> d(n);
  for (int i = 2; i + 2 < n; ++i)
    d[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
  d[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h);
  d[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) / (12.0 * h);
  d[n - 2] = (3.0 * u[n - 1] + 10.0 * u[n - 2] - 18.0 * u[n - 3] + 6.0 * u[n - 4] -
              u[n - 5]) /
             (12.0 * h);
  d[n - 1] = (25.0 * u[n - 1] - 48.0 * u[n - 2] + 36.0 * u[n - 3] - 16.0 * u[n - 4] +
              3.0 * u[n - 5]) /
             (12.0 * h);
  return d;
}

using RhsFn = std::function<double(double x, double u)>;

Trajectory mesh_trajectory(const std::vector<double>& xs, const std::vector<double>& full,
                           const RhsFn& rhs) {
  int n = static_cast<int>(xs.size());
  double h = xs[1] - xs[0];
  std::vector<double> du = derivative_values(full, h);
  std::vector<double> ys(2 * n), fs(2 * n);
  for (int i = 0; i < n; ++i) {
    ys[2 * i] = full[i];
    ys[2 * i + 1] = du[i];
    fs[2 * i] = du[i];
    fs[2 * i + 1] = -rhs(xs[i], full[i]);
  }
  return Trajectory::from_nodes(xs, std::move(ys), std::move(fs), 2);
}

NodalResult classify_mesh(const Trajectory& t, const RhsFn& rhs) {
  auto upp = [&t, &rhs](double x) { return -rhs(x, t.value(x, 0)); };
  return classify(t, 0, 1, upp);
}

void alpha_bound_notes(const Problem& p, std::vector<std::string>& notes) {
  double an = p.mp_plus().alpha_norm();
  if (!p.separated_minus()) an = std::max(an, p.mp_minus().alpha_norm());
  if (an >= 1.0) {
    std::ostringstream os;
    os << "alpha norm " << an << " is >= 1; the comparison principle behind "
       << "solvability is void";
    notes.push_back(os.str());
  }
}

// scan of the asymptotic slope r_inf(x) = lim_{|s|->inf} f(x,s)/s; the fixed
// problem is solvable when no eigenvalue of the r_inf weight sits at 1
void asymptotic_slope_notes(const Problem& p, const RhsForm& rf,
                            std::vector<std::string>& notes) {
  const double U = 1e8;
  const int G = 41;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, mismatch = 0.0;
  for (int i = 0; i < G; ++i) {
    double x = -1.0 + 2.0 * i / (G - 1);
    double a = rf.value(1.0, x, U) / U;
    double b = rf.value(1.0, x, -U) / (-U);
    lo = std::min({lo, a, b});
    hi = std::max({hi, std::fabs(a), std::fabs(b)});
    mismatch = std::max(mismatch, std::fabs(a - b));
  }
  if (!(lo > 1e-9 * std::max(1.0, hi)) || mismatch > 1e-3 * std::max(1.0, hi)) {
    notes.push_back(
        "asymptotic slope f(x,s)/s does not settle to one positive weight; "
        "resonance scan skipped");
    return;
  }
  auto val = [rf, U](double x) { return rf.value(1.0, x, U) / U; };
  auto der = [val](double x) {
    double e = 1e-5;
    double a = std::max(-1.0, x - e), b = std::min(1.0, x + e);
    return (val(b) - val(a)) / (b - a);
  };
  std::vector<double> breaks;
  if (rf.f) breaks = rf.f->breakpoints();
  if (rf.g) breaks = rf.g->breakpoints();
  Coefficient rinf = Coefficient::function(val, der, breaks);
  try {
    std::vector<DirichletPair> dp = dirichlet_spectrum(rinf, 20);
    int kstar = 20;
    for (const auto& d : dp)
      if (d.lambda > 25.0) {
        kstar = d.k;
        break;
      }
    Problem q;
    q.spec.bc_minus = p.spec.bc_minus;
    q.spec.bc_plus = p.spec.bc_plus;
    q.r = rinf;
    SpectrumResult sp = compute_spectrum(q, kstar);
    double closest = std::numeric_limits<double>::infinity();
    int kc = 0;
    for (const auto& e : sp.pairs) {
      double rel = std::fabs(e.lambda - 1.0) / std::max(1.0, std::fabs(e.lambda));
      if (rel < closest) {
        closest = rel;
        kc = e.k;
      }
      if (rel <= 1e-6) {
        std::ostringstream os;
        os << "asymptotic slope resonant at k = " << e.k << ": lambda_" << e.k
           << "(r_inf) = " << e.lambda << "; the solvability hypothesis fails";
        notes.push_back(os.str());
      }
    }
    std::ostringstream os;
    os << "resonance scan over k <= " << kstar << ": min |lambda_k(r_inf) - 1| = "
       << closest << " (relative) at k = " << kc;
    notes.push_back(os.str());
  } catch (const std::exception& e) {
    notes.push_back(std::string("resonance scan failed: ") + e.what());
  }
}

// fine solution plus a warm-started half-resolution companion; the shared
// nodes are combined to cancel the h^2 stencil error, so sampled values are
// fourth-order while residual_inf reports the raw fine-mesh defect
BVPSolution assemble_solution(const Problem& p, const RhsForm& rf, double lam,
                              const Collocation& cf, const NewtonOut& fine,
                              std::vector<std::string> notes) {
  Collocation cc = make_collocation(p, kCoarseM);
  std::vector<double> ffull = full_values(cf, fine.v);
  std::vector<double> vg(kCoarseM - 1);
  for (int j = 1; j < kCoarseM; ++j) vg[j - 1] = ffull[2 * j];
  BorderSpec none;
  NewtonOut coarse = newton_solve(cc, rf, std::move(vg), lam, none);
  if (!coarse.converged)
    throw std::runtime_error("half-resolution companion solve did not converge");
  std::vector<double> cfull = full_values(cc, coarse.v);
  std::vector<double> xr = mesh_nodes(kCoarseM);
  std::vector<double> ur(kCoarseM + 1);
  for (int i = 0; i <= kCoarseM; ++i) ur[i] = (4.0 * ffull[2 * i] - cfull[i]) / 3.0;

  BVPSolution out;
  out.lambda = lam;
  RhsFn rhs = [rf, lam](double x, double u) { return rf.value(lam, x, u); };
  out.samples = mesh_trajectory(xr, ur, rhs);
  out.residual_inf = fine.res_inf;
  out.nodal = classify_mesh(out.samples, rhs);
  out.notes = std::move(notes);
  return out;
}

std::string join_warnings(const std::vector<std::string>& ws) {
  std::string s;
  for (const auto& w : ws) {
    s += "; ";
    s += w;
  }
  return s;
}

}  // namespace

const char* to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::reached_target: return "reached_target";
    case BranchStatus::left_window: return "left_window";
    case BranchStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

BVPSolution solve_fixed(const Problem& p, const std::vector<double>& guess) {
  if (!p.f && !p.g)
    throw std::invalid_argument("solve_fixed needs a declared nonlinearity f or g");
  RhsForm rf;
  if (p.f)
    rf.f = &*p.f;
  else
    rf.g = &*p.g;  // solves -u'' = g(x,u) u at lambda = 1

  Collocation cf = make_collocation(p, kFineM);
  std::vector<double> v(kFineM - 1, 0.0);
  if (!guess.empty()) {
    if (static_cast<int>(guess.size()) != kFineM + 1)
      throw std::invalid_argument("guess must give node values on the 1025-point mesh");
    for (int j = 1; j < kFineM; ++j) v[j - 1] = guess[j];
  }
  BorderSpec none;
  NewtonOut fine = newton_solve(cf, rf, std::move(v), 1.0, none);
  if (!fine.converged) {
    std::ostringstream os;
    os << "newton did not converge (residual " << fine.res_inf << " after "
       << fine.iters << " iterations)";
    throw std::runtime_error(os.str());
  }
  std::vector<std::string> notes;
  alpha_bound_notes(p, notes);
  asymptotic_slope_notes(p, rf, notes);
  return assemble_solution(p, rf, 1.0, cf, fine, std::move(notes));
}

CrossingReport crossing_check(const Problem& p, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!p.g_r_part || !p.g_tilde_part)
    throw std::invalid_argument(
        "crossing_check needs the declared product form g = r(x)*gtilde(u)");
  auto gt = [&p](double s) { return p.g_tilde_part->value2(0.0, s); };
  double g0 = gt(0.0);
  double gp = gt(1e8), gm = gt(-1e8);
  if (!(g0 > 0.0) || !(gp > 0.0) || !(gm > 0.0))
    throw std::invalid_argument("gtilde must stay positive");
  if (std::fabs(gp - gm) > 1e-3 * std::max({1.0, std::fabs(gp), std::fabs(gm)}))
    throw std::invalid_argument("gtilde has different limits at +-infinity");
  double ginf = 0.5 * (gp + gm);

  Problem q;
  q.spec.bc_minus = p.spec.bc_minus;
  q.spec.bc_plus = p.spec.bc_plus;
  q.r = *p.g_r_part;
  SpectrumResult sp = compute_spectrum(q, k);
  const Eigenpair* pk = nullptr;
  for (const auto& e : sp.pairs)
    if (e.k == k) pk = &e;
  if (!pk)
    throw std::runtime_error("weight spectrum has no eigenvalue at k = " +
                             std::to_string(k) + join_warnings(sp.warnings));
  CrossingReport cr;
  cr.lambda_k_0 = pk->lambda / g0;
  cr.lambda_k_inf = pk->lambda / ginf;
  cr.crosses = (cr.lambda_k_0 - 1.0) * (cr.lambda_k_inf - 1.0) < 0.0;
  return cr;
}

Branch branch_continue(const Problem& p, int k, int nu,
                       std::pair<double, double> lambda_window, double target_lambda,
                       int max_points, double sup_cap) {
  if (!p.g) throw std::invalid_argument("branch_continue needs the nonlinearity g");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (nu != 1 && nu != -1) throw std::invalid_argument("nu must be +1 or -1");
  RhsForm rf;
  rf.g = &*p.g;
  const Coefficient& g = *p.g;

  Branch br;
  br.k = k;
  br.nu = nu;

  // continuum bifurcation value from the zero-amplitude weight g(.,0)
  Coefficient w0 = Coefficient::function([&g](double x) { return g.value2(x, 0.0); },
                                         [&g](double x) { return g.dx(x, 0.0); },
                                         g.breakpoints());
  Problem q;
  q.spec.bc_minus = p.spec.bc_minus;
  q.spec.bc_plus = p.spec.bc_plus;
  q.r = w0;
  SpectrumResult sp = compute_spectrum(q, k);
  const Eigenpair* pk = nullptr;
  for (const auto& e : sp.pairs)
    if (e.k == k) pk = &e;
  if (!pk)
    throw std::runtime_error("no bifurcation eigenvalue at k = " + std::to_string(k) +
                             join_warnings(sp.warnings));
  br.origin = pk->lambda;
  for (const auto& w : sp.warnings) br.notes.push_back("weight spectrum: " + w);
  alpha_bound_notes(p, br.notes);

  // certified-regime tag from the a-priori constants
  try {
    NonlinearConstants nc = nonlinear_constants(g);
    double gam = nc.gamma_lower(nc.Lambda_k(k));
    double an = p.mp_plus().alpha_norm();
    if (!p.separated_minus()) an = std::max(an, p.mp_minus().alpha_norm());
    if (an >= gam) {
      std::ostringstream os;
      os << "alpha norm " << an << " is outside the certified regime (gamma at "
         << "Lambda_" << k << " = " << gam << ")";
      br.notes.push_back(os.str());
    }
  } catch (const std::exception& e) {
    br.notes.push_back(std::string("a-priori constants unavailable: ") + e.what());
  }

  Collocation cf = make_collocation(p, kFineM);
  br.mesh = cf.x;
  const int n = kFineM - 1;
  const double h2 = cf.h * cf.h;

  // discrete bifurcation mode by shifted inverse iteration on the pencil
  // (second differences, diag of the zero-amplitude weight)
  std::vector<Triplet> ta;
  for (int j = 1; j < kFineM; ++j) {
    int row = j - 1;
    ta.emplace_back(row, row, 2.0 / h2);
    if (j - 1 >= 1) ta.emplace_back(row, j - 2, -1.0 / h2);
    if (j + 1 <= kFineM - 1) ta.emplace_back(row, j, -1.0 / h2);
    if (j == 1)
      for (const auto& [jj, w] : cf.be.e0) ta.emplace_back(row, jj - 1, -w / h2);
    if (j == kFineM - 1)
      for (const auto& [jj, w] : cf.be.eM) ta.emplace_back(row, jj - 1, -w / h2);
  }
  SpMat A(n, n);
  A.setFromTriplets(ta.begin(), ta.end());
  Eigen::VectorXd Bd(n);
  for (int j = 1; j < kFineM; ++j) Bd[j - 1] = w0.value(cf.x[j]);

  double sigma = br.origin;
  Eigen::SparseLU<SpMat> slu;
  for (int attempt = 0;; ++attempt) {
    std::vector<Triplet> ts = ta;
    for (int i = 0; i < n; ++i) ts.emplace_back(i, i, -sigma * Bd[i]);
    SpMat As(n, n);
    As.setFromTriplets(ts.begin(), ts.end());
    slu.compute(As);
    if (slu.info() == Eigen::Success) break;
    if (attempt >= 3) throw std::runtime_error("shifted pencil factorization failed");
    sigma *= 1.0 + 1e-6;
  }
  Eigen::VectorXd mv(n);
  for (int j = 1; j < kFineM; ++j) mv[j - 1] = std::sin(0.5 * k * kPi * (cf.x[j] + 1.0));
  double lam_h = br.origin;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd z = slu.solve(Bd.cwiseProduct(mv).eval());
    double nz = z.cwiseAbs().maxCoeff();
    if (!(nz > 0.0) || !std::isfinite(nz))
      throw std::runtime_error("inverse iteration for the bifurcation mode broke down");
    mv = z / nz;
    double num = mv.dot(A * mv), den = mv.dot(Bd.cwiseProduct(mv).eval());
    double lam_new = num / den;
    if (std::fabs(lam_new - lam_h) <= 1e-12 * std::max(1.0, std::fabs(lam_new)) && it > 1) {
      lam_h = lam_new;
      break;
    }
    lam_h = lam_new;
  }
  {
    Eigen::VectorXd res = A * mv - lam_h * Bd.cwiseProduct(mv).eval();
    double rn = res.cwiseAbs().maxCoeff() / std::max(1.0, (A * mv).cwiseAbs().maxCoeff());
    if (rn > 1e-6) {
      std::ostringstream os;
      os << "bifurcation mode residual " << rn << " is large; the pencil may be "
         << "near-degenerate at k = " << k;
      br.notes.push_back(os.str());
    }
  }

  std::vector<double> phi(mv.data(), mv.data() + n);
  {
    std::vector<double> pf = full_values(cf, phi);
    double s = sup_norm_of(pf);
    for (double& x : phi) x /= s;
  }
  std::vector<double> phifull = full_values(cf, phi);
  RhsFn mode_rhs = [&w0, lam_h](double x, double u) { return lam_h * w0.value(x) * u; };
  NodalResult nphi = classify_mesh(mesh_trajectory(cf.x, phifull, mode_rhs), mode_rhs);
  if (!nphi.ok() || nphi.cls->k != k) {
    std::ostringstream os;
    os << "discrete bifurcation mode near lambda = " << br.origin
       << " does not classify as a T_" << k << " profile";
    throw std::runtime_error(os.str());
  }
  int sign = (nphi.cls->nu == nu) ? +1 : -1;

  double hphi2 = 0.0;
  for (double x : phi) hphi2 += x * x;
  hphi2 *= cf.h;

  auto accept_point = [&](const NewtonOut& s) {
    BranchPoint bp;
    bp.u = full_values(cf, s.v);
    bp.lambda = s.lam;
    bp.sup_norm = sup_norm_of(bp.u);
    return bp;
  };
  auto point_class = [&](const BranchPoint& bp) {
    RhsFn rhs = [rf, lam = bp.lambda](double x, double u) { return rf.value(lam, x, u); };
    return classify_mesh(mesh_trajectory(cf.x, bp.u, rhs), rhs);
  };
  auto class_matches = [&](const NodalResult& nr) {
    return nr.ok() && nr.cls->k == k && nr.cls->nu == nu;
  };
  auto require_class = [&](const BranchPoint& bp, const char* where) {
    NodalResult nr = point_class(bp);
    if (!class_matches(nr)) {
      std::ostringstream os;
      os << "nodal class lost " << where << ": lambda = " << bp.lambda
         << ", sup = " << bp.sup_norm << ", classified as "
         << (nr.ok() ? nr.cls->name() : std::string("nothing"));
      throw NodalClassLost(os.str(), bp.lambda, bp.sup_norm);
    }
  };

  // two amplitude-pinned startup solves seed the arclength secant
  const double eps_amp = 1e-3;
  auto pinned = [&](double a, std::vector<double> vstart, double lamstart) {
    BorderSpec bs;
    bs.mode = Border::pin;
    bs.phi = phi;
    bs.target = a * hphi2;
    return newton_solve(cf, rf, std::move(vstart), lamstart, bs);
  };
  double a1 = sign * eps_amp;
  std::vector<double> vs1(n);
  for (int i = 0; i < n; ++i) vs1[i] = a1 * phi[i];
  NewtonOut s1 = pinned(a1, std::move(vs1), lam_h);
  if (!s1.converged)
    throw std::runtime_error("branch startup failed at the first pinned amplitude");
  std::vector<double> vs2(n);
  for (int i = 0; i < n; ++i) vs2[i] = 2.0 * s1.v[i];
  NewtonOut s2 = pinned(2.0 * a1, std::move(vs2), s1.lam);
  if (!s2.converged)
    throw std::runtime_error("branch startup failed at the second pinned amplitude");

  br.points.push_back(accept_point(s1));
  require_class(br.points.back(), "at startup");
  br.points.push_back(accept_point(s2));
  require_class(br.points.back(), "at startup");

  std::vector<double> vprev = s1.v, vcur = s2.v;
  double lprev = s1.lam, lcur = s2.lam;
  double ds = 0.05;
  const double ds_min = 1e-4, ds_max = 0.5;

  auto polish_at = [&](double lam_t, std::vector<double> vg) {
    BorderSpec none;
    return newton_solve(cf, rf, std::move(vg), lam_t, none);
  };

  while (static_cast<int>(br.points.size()) < max_points) {
    double A_s = std::max(1.0, br.points.back().sup_norm);
    double L_s = std::max(1.0, std::fabs(lcur));
    std::vector<double> tu(n);
    for (int i = 0; i < n; ++i) tu[i] = vcur[i] - vprev[i];
    double tl = lcur - lprev;
    double nn = 0.0;
    for (double d : tu) nn += d * d;
    nn = std::sqrt(0.5 * cf.h * nn / (A_s * A_s) + (tl / L_s) * (tl / L_s));
    if (!(nn > 0.0)) {
      br.status = BranchStatus::step_failure;
      br.notes.push_back("branch stalled on a zero secant tangent");
      return br;
    }
    for (double& d : tu) d /= nn;
    tl /= nn;

    for (;;) {
      BorderSpec bs;
      bs.mode = Border::arclength;
      bs.tu = tu;
      bs.tl = tl;
      bs.Au = A_s;
      bs.Al = L_s;
      bs.up.resize(n);
      for (int i = 0; i < n; ++i) bs.up[i] = vcur[i] + ds * tu[i];
      bs.lp = lcur + ds * tl;
      NewtonOut cand = newton_solve(cf, rf, bs.up, bs.lp, bs, 25);
      BranchPoint bp;
      bool class_ok = false;
      if (cand.converged) {
        bp = accept_point(cand);
        class_ok = class_matches(point_class(bp));
      }
      if (cand.converged && class_ok) {
        bool crossed = (lcur - target_lambda) * (cand.lam - target_lambda) <= 0.0 &&
                       cand.lam != lcur;
        if (crossed) {
          double t = (target_lambda - lcur) / (cand.lam - lcur);
          std::vector<double> vg(n);
          for (int i = 0; i < n; ++i) vg[i] = vcur[i] + t * (cand.v[i] - vcur[i]);
          NewtonOut pol = polish_at(target_lambda, std::move(vg));
          if (!pol.converged)
            throw std::runtime_error("polish at the target lambda did not converge");
          BranchPoint bt = accept_point(pol);
          require_class(bt, "at the target polish");
          br.points.push_back(std::move(bt));
          br.status = BranchStatus::reached_target;
          return br;
        }
        if (cand.lam < lambda_window.first || cand.lam > lambda_window.second) {
          br.points.push_back(std::move(bp));
          br.status = BranchStatus::left_window;
          std::ostringstream os;
          os << "left the lambda window at lambda = " << cand.lam;
          br.notes.push_back(os.str());
          return br;
        }
        br.points.push_back(bp);
        if (bp.sup_norm > sup_cap) {
          br.status = BranchStatus::step_failure;
          std::ostringstream os;
          os << "amplitude cap " << sup_cap << " reached at lambda = " << cand.lam;
          br.notes.push_back(os.str());
          return br;
        }
        vprev = std::move(vcur);
        lprev = lcur;
        vcur = cand.v;
        lcur = cand.lam;
        if (cand.iters <= 4) ds = std::min(ds_max, 1.3 * ds);
        break;
      }
      // shrink the step; a converged but misclassified point shrinks harder
      ds *= cand.converged ? 0.35 : 0.5;
      if (ds < ds_min) {
        if (cand.converged) {
          std::ostringstream os;
          os << "nodal class lost at lambda = " << bp.lambda << ", sup = "
             << bp.sup_norm << " with the arclength step at its floor";
          throw NodalClassLost(os.str(), bp.lambda, bp.sup_norm);
        }
        br.status = BranchStatus::step_failure;
        std::ostringstream os;
        os << "corrector failed below the minimum arclength step near lambda = "
           << lcur;
        br.notes.push_back(os.str());
        return br;
      }
    }
  }
  br.status = BranchStatus::step_failure;
  br.notes.push_back("point budget exhausted before any stop condition");
  return br;
}

BVPSolution find_nodal_solution(const Problem& p, int k, int nu) {
  CrossingReport cr = crossing_check(p, k);
  if (!cr.crosses) {
    std::ostringstream os;
    os << "no eigenvalue crossing for k = " << k << ": lambda_k_0 = " << cr.lambda_k_0
       << " and lambda_k_inf = " << cr.lambda_k_inf << " sit on the same side of 1";
    throw std::invalid_argument(os.str());
  }
  double lo = std::min({cr.lambda_k_0, cr.lambda_k_inf, 1.0});
  double hi = std::max({cr.lambda_k_0, cr.lambda_k_inf, 1.0});
  Branch br = branch_continue(p, k, nu, {0.5 * lo, 2.0 * hi + 1.0}, 1.0);
  if (br.status != BranchStatus::reached_target) {
    std::ostringstream os;
    os << "branch stopped before lambda = 1 (" << to_string(br.status)
       << ", last lambda = " << br.points.back().lambda << ")"
       << join_warnings(br.notes);
    throw std::runtime_error(os.str());
  }

  RhsForm rf;
  rf.g = &*p.g;
  Collocation cf = make_collocation(p, kFineM);
  const BranchPoint& last = br.points.back();
  std::vector<double> v(kFineM - 1);
  for (int j = 1; j < kFineM; ++j) v[j - 1] = last.u[j];
  BorderSpec none;
  NewtonOut fin = newton_solve(cf, rf, std::move(v), 1.0, none);
  if (!fin.converged)
    throw std::runtime_error("final polish at lambda = 1 did not converge");

  std::vector<std::string> notes = br.notes;
  {
    std::ostringstream os;
    os << "crossing: lambda_k_0 = " << cr.lambda_k_0
       << ", lambda_k_inf = " << cr.lambda_k_inf;
    notes.push_back(os.str());
  }
  BVPSolution out = assemble_solution(p, rf, 1.0, cf, fin, std::move(notes));
  if (!out.nodal.ok() || out.nodal.cls->k != k || out.nodal.cls->nu != nu) {
    double sup = out.samples.sup_abs(0);
    throw NodalClassLost("polished solution fell out of the tracked nodal class", 1.0,
                         sup);
  }
  return out;
}

void write_branch_csv(const Branch& b, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  os << "lambda,sup_norm,k,nu\n";
  for (const auto& pt : b.points)
    os << pt.lambda << ',' << pt.sup_norm << ',' << b.k << ',' << b.nu << '\n';
  if (!os) throw std::runtime_error("write failed for " + path);
}

void write_solution_csv(const BVPSolution& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  os << "x,u\n";
  for (std::size_t i = 0; i < s.samples.nodes(); ++i)
    os << s.samples.xs()[i] << ',' << s.samples.node_value(i, 0) << '\n';
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace mpspec
