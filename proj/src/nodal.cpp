#include "mpspec/nodal.hpp"

#include <cmath>

namespace mpspec {

namespace {

struct Samples {
  std::vector<double> x, u, up;
  double max_up = 0.0;
};

Samples take_samples(const CurveSampler& curve, int scan) {
  Samples s;
  s.x.resize(scan + 1);
  s.u.resize(scan + 1);
  s.up.resize(scan + 1);
  for (int j = 0; j <= scan; ++j) {
    s.x[j] = -1.0 + 2.0 * j / scan;
    curve(s.x[j], s.u[j], s.up[j]);
    s.max_up = std::max(s.max_up, std::fabs(s.up[j]));
  }
  return s;
}

double up_at(const CurveSampler& curve, double x) {
  double u, up;
  curve(x, u, up);
  return up;
}

double u_at(const CurveSampler& curve, double x) {
  double u, up;
  curve(x, u, up);
  return u;
}

// all sign crossings of u' strictly inside (-1,1), refined by bisection;
// a run of exact zero samples counts once, and only if the signs flanking
// the run differ (a constant u' therefore reports no zeros)
std::vector<double> up_zeros(const CurveSampler& curve, const Samples& s) {
  std::vector<double> zs;
  int scan = static_cast<int>(s.x.size()) - 1;
  int j = 0;
  while (j < scan) {
    double fa = s.up[j], fb = s.up[j + 1];
    if (fb == 0.0) {
      int e = j + 1;  // run of exact zero samples [e, re]
      int re = e;
      while (re + 1 <= scan && s.up[re + 1] == 0.0) ++re;
      if (fa != 0.0 && re < scan && fa * s.up[re + 1] < 0.0)
        zs.push_back(0.5 * (s.x[e] + s.x[re]));
      j = re;
      continue;
    }
    if (fa * fb < 0.0) {
      double a = s.x[j], b = s.x[j + 1];
      for (int it = 0; it < 90 && (b - a) > 1e-14; ++it) {
        double m = 0.5 * (a + b);
        double fm = up_at(curve, m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (fa * fm < 0.0) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      zs.push_back(0.5 * (a + b));
    }
    ++j;
  }
  return zs;
}

}  // namespace

std::string NodalClass::name() const {
  return "T_" + std::to_string(k) + (nu > 0 ? "^+" : "^-");
}

const char* to_string(NotNodalReason r) {
  switch (r) {
    case NotNodalReason::none: return "none";
    case NotNodalReason::boundary_derivative_zero: return "boundary_derivative_zero";
    case NotNodalReason::non_simple_zero: return "non_simple_zero";
    case NotNodalReason::missing_interior_sign_change: return "missing_interior_sign_change";
    case NotNodalReason::no_zeros: return "no_zeros";
  }
  return "?";
}

NodalResult classify(const CurveSampler& curve,
                     const std::function<double(double)>& upp_hint,
                     const NodalOptions& opt) {
  NodalResult res;
  Samples s = take_samples(curve, opt.scan);

  if (std::fabs(s.up.front()) <= opt.tol_boundary * s.max_up ||
      std::fabs(s.up.back()) <= opt.tol_boundary * s.max_up) {
    res.reason = NotNodalReason::boundary_derivative_zero;
    return res;
  }

  std::vector<double> zs = up_zeros(curve, s);
  if (zs.empty()) {
    res.reason = NotNodalReason::no_zeros;
    return res;
  }

  double max_upp = 0.0;
  for (double x : s.x) max_upp = std::max(max_upp, std::fabs(upp_hint(x)));
  for (double z : zs) {
    if (std::fabs(upp_hint(z)) <= opt.tol_simple * max_upp) {
      res.reason = NotNodalReason::non_simple_zero;
      return res;
    }
  }

  // u is strictly monotone between consecutive simple extrema, so the sign
  // change there is equivalent to opposite signs of the extremal values
  std::vector<double> changes;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    double ua = u_at(curve, zs[i]), ub = u_at(curve, zs[i + 1]);
    if (!(ua * ub < 0.0)) {
      res.reason = NotNodalReason::missing_interior_sign_change;
      return res;
    }
    double a = zs[i], b = zs[i + 1], fa = ua;
    for (int it = 0; it < 90 && (b - a) > 1e-14; ++it) {
      double m = 0.5 * (a + b);
      double fm = u_at(curve, m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if (fa * fm < 0.0) {
        b = m;
      } else {
        a = m;
        fa = fm;
      }
    }
    changes.push_back(0.5 * (a + b));
  }

  NodalClass cls;
  cls.k = static_cast<int>(zs.size());
  cls.nu = s.up.front() > 0.0 ? +1 : -1;
  cls.zeros_of_up = std::move(zs);
  cls.sign_changes_of_u = std::move(changes);
  res.cls = std::move(cls);
  return res;
}

NodalResult classify(const Trajectory& t, int cu, int cup,
                     const std::function<double(double)>& upp_hint,
                     const NodalOptions& opt) {
  auto curve = [&t, cu, cup](double x, double& u, double& up) {
    u = t.value(x, cu);
    up = t.value(x, cup);
  };
  return classify(curve, upp_hint, opt);
}

int oscillation_count(const CurveSampler& curve, int scan) {
  Samples s = take_samples(curve, scan);
  return static_cast<int>(up_zeros(curve, s).size());
}

int oscillation_count(const Trajectory& t, int cu, int cup, int scan) {
  auto curve = [&t, cu, cup](double x, double& u, double& up) {
    u = t.value(x, cu);
    up = t.value(x, cup);
  };
  return oscillation_count(curve, scan);
}

}  // namespace mpspec
