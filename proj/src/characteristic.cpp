#include "mpspec/characteristic.hpp"

#include <cmath>
#include <stdexcept>

namespace mpspec {

namespace {

const double kPi = 3.14159265358979323846;

// B applied to one 2-component column (value, derivative) of a trajectory
double apply_mp(const Trajectory& t, int c_val, const MultiPointCondition& bc) {
  double v = t.value(bc.side > 0 ? 1.0 : -1.0, c_val);
  for (std::size_t i = 0; i < bc.alphas.size(); ++i)
    v -= bc.alphas[i] * t.value(bc.etas[i], c_val);
  return v;
}

double apply_sep(const Trajectory& t, int c_val, const SeparatedCondition& bc) {
  return bc.c0 * t.value(-1.0, c_val) + bc.c1 * t.value(-1.0, c_val + 1);
}

}  // namespace

GammaValue gamma(const VariationalTrajectory& vt, const MultiPointCondition& bc) {
  GammaValue g;
  g.side = bc.side;
  g.family = vt.family;
  g.value = apply_mp(vt.traj, 0, bc);
  g.d_theta = apply_mp(vt.traj, 2, bc);
  g.d_lambda = apply_mp(vt.traj, 4, bc);
  return g;
}

GammaValue gamma(const VariationalTrajectory& vt, const SeparatedCondition& bc) {
  GammaValue g;
  g.side = -1;
  g.family = vt.family;
  g.value = apply_sep(vt.traj, 0, bc);
  g.d_theta = apply_sep(vt.traj, 2, bc);
  g.d_lambda = apply_sep(vt.traj, 4, bc);
  return g;
}

GammaValue gamma_side(const Problem& p, const VariationalTrajectory& vt, int side) {
  if (side < 0 && p.separated_minus()) return gamma(vt, p.sep_minus());
  return gamma(vt, p.mp(side));
}

double JacobianValue::normalized() const {
  double n0 = std::hypot(entries[0][0], entries[0][1]);
  double n1 = std::hypot(entries[1][0], entries[1][1]);
  if (n0 == 0.0 || n1 == 0.0) return 0.0;
  return std::fabs(det) / (n0 * n1);
}

JacobianValue jacobian(const Problem& p, const VariationalTrajectory& vt) {
  GammaValue gm = gamma_side(p, vt, -1);
  GammaValue gp = gamma_side(p, vt, +1);
  JacobianValue j;
  j.entries[0][0] = gm.d_lambda;
  j.entries[0][1] = gm.d_theta;
  j.entries[1][0] = gp.d_lambda;
  j.entries[1][1] = gp.d_theta;
  j.det = gm.d_lambda * gp.d_theta - gm.d_theta * gp.d_lambda;
  return j;
}

JacobianValue jacobian(const Problem& p, double lambda, double theta, Family family,
                       double tol) {
  VariationalTrajectory vt = integrate_variational(p.r, lambda, theta, family, tol);
  return jacobian(p, vt);
}

BoundaryMatrix boundary_matrix(const Problem& p, double lambda, double tol) {
  Trajectory basis = integrate_basis(p.r, lambda, tol);
  BoundaryMatrix bm;
  if (p.separated_minus()) {
    bm.m[0][0] = apply_sep(basis, 0, p.sep_minus());
    bm.m[0][1] = apply_sep(basis, 2, p.sep_minus());
  } else {
    bm.m[0][0] = apply_mp(basis, 0, p.mp_minus());
    bm.m[0][1] = apply_mp(basis, 2, p.mp_minus());
  }
  bm.m[1][0] = apply_mp(basis, 0, p.mp_plus());
  bm.m[1][1] = apply_mp(basis, 2, p.mp_plus());
  return bm;
}

double characteristic_determinant(const Problem& p, double lambda, double tol) {
  return boundary_matrix(p, lambda, tol).det();
}

namespace {

// single-condition functional on a 2-component solution trajectory
double single_value(const Trajectory& t, double eta0, const MultiPointCondition& mpc) {
  double v = t.value(eta0, 0);
  for (std::size_t i = 0; i < mpc.alphas.size(); ++i)
    v -= mpc.alphas[i] * t.value(mpc.etas[i], 0);
  return v;
}

double single_at(const Coefficient& r, double lambda, double theta, double eta0,
                 const MultiPointCondition& mpc, double tol) {
  double ic[6];
  family_init(r, lambda, theta, Family::energy, ic);
  Trajectory t = integrate_two_sided(r, lambda, {ic[0], ic[1]}, tol);
  return single_value(t, eta0, mpc);
}

}  // namespace

double gamma_single(const Coefficient& r, double lambda, double theta, double eta0,
                    const MultiPointCondition& mpc, double tol) {
  return single_at(r, lambda, theta, eta0, mpc, tol);
}

std::vector<ThetaZero> theta_zeros(const Coefficient& r, double lambda, double eta0,
                                   const MultiPointCondition& mpc, int scan, double tol) {
  if (scan < 8) throw std::invalid_argument("theta scan too coarse");
  // each scan point is an independent integration: zero counting must not
  // inherit smoothness from a shared trajectory
  std::vector<double> vals(scan + 1);
  for (int j = 0; j <= scan; ++j)
    vals[j] = single_at(r, lambda, j * kPi / scan, eta0, mpc, tol);

  std::vector<ThetaZero> out;
  auto push_zero = [&](double th) {
    // fold [0,pi] onto [0,pi); a zero at pi is the zero at 0 of -w
    if (th >= kPi - 1e-12) th -= kPi;
    for (const ThetaZero& z : out)
      if (std::fabs(z.theta - th) < 1e-9) return;
    VariationalTrajectory vt = integrate_variational(r, lambda, th, Family::energy, tol);
    ThetaZero z;
    z.theta = th;
    double d = vt.wth(eta0);
    for (std::size_t i = 0; i < mpc.alphas.size(); ++i)
      d -= mpc.alphas[i] * vt.wth(mpc.etas[i]);
    z.d_theta = d;
    out.push_back(z);
  };

  for (int j = 0; j < scan; ++j) {
    double a = j * kPi / scan, b = (j + 1) * kPi / scan;
    double fa = vals[j], fb = vals[j + 1];
    if (fa == 0.0) {
      push_zero(a);
      continue;
    }
    if (fa * fb < 0.0) {
      for (int it = 0; it < 100 && (b - a) > 1e-12; ++it) {
        double m = 0.5 * (a + b);
        double fm = single_at(r, lambda, m, eta0, mpc, tol);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        (fa * fm < 0.0 ? b : a) = m;
        (fa * fm < 0.0 ? fb : fa) = fm;
      }
      push_zero(0.5 * (a + b));
    }
  }
  if (vals[scan] == 0.0) push_zero(kPi);
  return out;
}

int count_theta_zeros(const Coefficient& r, double lambda, double eta0,
                      const MultiPointCondition& mpc, int scan, double tol) {
  return static_cast<int>(theta_zeros(r, lambda, eta0, mpc, scan, tol).size());
}

}  // namespace mpspec
