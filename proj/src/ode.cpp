#include "mpspec/ode.hpp"

#include <algorithm>
#include <cmath>

namespace mpspec {

// Dormand-Prince 5(4) tableau
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// y5 - y4 error weights (b row minus the embedded 4th order row)
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
}  // namespace dp

std::size_t Trajectory::locate(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it - xs_.begin();
  if (i == 0) return 0;
  if (i >= xs_.size()) return xs_.size() - 2;
  return i - 1;
}

void Trajectory::sample(double x, double* y_out) const {
  double slack = 1e-9 * (1.0 + std::fabs(b() - a()));
  if (x < a() - slack || x > b() + slack)
    throw std::out_of_range("sample outside trajectory span");
  x = std::clamp(x, a(), b());
  std::size_t i = locate(x);
  double h = xs_[i + 1] - xs_[i];
  double t = (x - xs_[i]) / h;
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  double h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t);
  double h11 = t * t * (t - 1);
  const double* y0 = &ys_[i * dim_];
  const double* y1 = &ys_[(i + 1) * dim_];
  const double* f0 = &fs_[i * dim_];
  const double* f1 = &fs_[(i + 1) * dim_];
  for (int c = 0; c < dim_; ++c)
    y_out[c] = h00 * y0[c] + h * h10 * f0[c] + h01 * y1[c] + h * h11 * f1[c];
}

double Trajectory::value(double x, int c) const {
  static thread_local std::vector<double> buf;
  buf.resize(dim_);
  sample(x, buf.data());
  return buf[c];
}

double Trajectory::sup_abs(int c) const {
  double m = 0.0;
  static thread_local std::vector<double> buf;
  buf.resize(dim_);
  for (std::size_t i = 0; i < xs_.size(); ++i) m = std::max(m, std::fabs(ys_[i * dim_ + c]));
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    sample(0.5 * (xs_[i] + xs_[i + 1]), buf.data());
    m = std::max(m, std::fabs(buf[c]));
  }
  return m;
}

Trajectory Trajectory::merge(Trajectory left, const Trajectory& right) {
  if (left.dim_ != right.dim_) throw std::logic_error("merge: dimension mismatch");
  if (std::fabs(left.b() - right.a()) > 1e-12)
    throw std::logic_error("merge: trajectories do not abut");
  // drop the duplicated shared node from the right part
  for (std::size_t i = 1; i < right.xs_.size(); ++i) {
    left.xs_.push_back(right.xs_[i]);
    for (int c = 0; c < left.dim_; ++c) {
      left.ys_.push_back(right.ys_[i * right.dim_ + c]);
      left.fs_.push_back(right.fs_[i * right.dim_ + c]);
    }
  }
  return left;
}

Trajectory Trajectory::from_nodes(std::vector<double> xs, std::vector<double> ys,
                                  std::vector<double> fs, int dim) {
  if (dim < 1 || xs.size() < 2 || ys.size() != xs.size() * dim || fs.size() != ys.size())
    throw std::invalid_argument("from_nodes: inconsistent node data");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("from_nodes: xs not ascending");
  Trajectory t;
  t.dim_ = dim;
  t.xs_ = std::move(xs);
  t.ys_ = std::move(ys);
  t.fs_ = std::move(fs);
  return t;
}

Trajectory integrate_ode(const OdeFn& f, int dim, const double* y0, double x0, double x1,
                         const OdeOptions& opt) {
  if (x0 == x1) throw std::invalid_argument("integrate_ode: empty span");
  double dir = x1 > x0 ? 1.0 : -1.0;

  // segment boundaries: sorted breakpoints strictly inside (x0,x1)
  std::vector<double> stops;
  for (double b : opt.breakpoints)
    if ((b - x0) * dir > 1e-14 && (x1 - b) * dir > 1e-14) stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  if (dir < 0) std::reverse(stops.begin(), stops.end());
  stops.push_back(x1);

  Trajectory out;
  out.dim_ = dim;
  std::vector<double> y(y0, y0 + dim), ynew(dim), yerr(dim);
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim),
      ytmp(dim);

  double x = x0;
  f(x, y.data(), k1.data());
  out.xs_.push_back(x);
  out.ys_.insert(out.ys_.end(), y.begin(), y.end());
  out.fs_.insert(out.fs_.end(), k1.begin(), k1.end());

  int steps = 0;
  double h = dir * std::min(1e-2, std::fabs(x1 - x0) / 10.0);

  for (double seg_end : stops) {
    bool fresh_segment = true;
    while ((seg_end - x) * dir > 1e-14 * (1.0 + std::fabs(seg_end))) {
      if (++steps > opt.max_steps) throw IntegrationError("step budget exhausted", x);
      if (std::fabs(h) < 1e-14 * (1.0 + std::fabs(x)))
        throw IntegrationError("step size underflow", x);
      if ((x + h - seg_end) * dir > 0) h = seg_end - x;
      if (fresh_segment) {
        f(x, y.data(), k1.data());  // restart slope at segment boundaries
        fresh_segment = false;
      }

      for (int c = 0; c < dim; ++c) ytmp[c] = y[c] + h * dp::a21 * k1[c];
      f(x + dp::c2 * h, ytmp.data(), k2.data());
      for (int c = 0; c < dim; ++c)
        ytmp[c] = y[c] + h * (dp::a31 * k1[c] + dp::a32 * k2[c]);
      f(x + dp::c3 * h, ytmp.data(), k3.data());
      for (int c = 0; c < dim; ++c)
        ytmp[c] = y[c] + h * (dp::a41 * k1[c] + dp::a42 * k2[c] + dp::a43 * k3[c]);
      f(x + dp::c4 * h, ytmp.data(), k4.data());
      for (int c = 0; c < dim; ++c)
        ytmp[c] = y[c] + h * (dp::a51 * k1[c] + dp::a52 * k2[c] + dp::a53 * k3[c] +
                              dp::a54 * k4[c]);
      f(x + dp::c5 * h, ytmp.data(), k5.data());
      for (int c = 0; c < dim; ++c)
        ytmp[c] = y[c] + h * (dp::a61 * k1[c] + dp::a62 * k2[c] + dp::a63 * k3[c] +
                              dp::a64 * k4[c] + dp::a65 * k5[c]);
      f(x + h, ytmp.data(), k6.data());
      for (int c = 0; c < dim; ++c)
        ynew[c] = y[c] + h * (dp::b1 * k1[c] + dp::b3 * k3[c] + dp::b4 * k4[c] +
                              dp::b5 * k5[c] + dp::b6 * k6[c]);
      f(x + h, ynew.data(), k7.data());

      double err = 0.0;
      for (int c = 0; c < dim; ++c) {
        double e = h * (dp::e1 * k1[c] + dp::e3 * k3[c] + dp::e4 * k4[c] + dp::e5 * k5[c] +
                        dp::e6 * k6[c] + dp::e7 * k7[c]);
        double sc = opt.atol + opt.rtol * std::max(std::fabs(y[c]), std::fabs(ynew[c]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / dim);

      if (err <= 1.0) {
        x += h;
        y.swap(ynew);
        k1.swap(k7);  // FSAL
        out.xs_.push_back(x);
        out.ys_.insert(out.ys_.end(), y.begin(), y.end());
        out.fs_.insert(out.fs_.end(), k1.begin(), k1.end());
        double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
      } else {
        double fac = 0.9 * std::pow(err, -0.2);
        h *= std::clamp(fac, 0.1, 0.9);
      }
    }
    // snap to the boundary exactly
    x = seg_end;
    out.xs_.back() = x;
  }

  if (dir < 0) {
    std::reverse(out.xs_.begin(), out.xs_.end());
    std::vector<double> ys(out.ys_.size()), fs(out.fs_.size());
    std::size_t n = out.xs_.size();
    for (std::size_t i = 0; i < n; ++i)
      for (int c = 0; c < dim; ++c) {
        ys[i * dim + c] = out.ys_[(n - 1 - i) * dim + c];
        fs[i * dim + c] = out.fs_[(n - 1 - i) * dim + c];
      }
    out.ys_.swap(ys);
    out.fs_.swap(fs);
  }
  return out;
}

double integrate_over(const Trajectory& traj, const std::function<double(double)>& fn,
                      double x0, double x1) {
  if (x0 == x1) return 0.0;
  double sign = 1.0;
  if (x1 < x0) {
    std::swap(x0, x1);
    sign = -1.0;
  }
  // panel boundaries: trajectory nodes clipped to [x0,x1]
  std::vector<double> pts;
  pts.push_back(x0);
  for (double x : traj.xs())
    if (x > x0 && x < x1) pts.push_back(x);
  pts.push_back(x1);

  static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
  static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                               0.6521451548625461, 0.3478548451374538};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double mid = 0.5 * (pts[i] + pts[i + 1]);
    double half = 0.5 * (pts[i + 1] - pts[i]);
    for (int q = 0; q < 4; ++q) total += gw[q] * half * fn(mid + half * gx[q]);
  }
  return sign * total;
}

double brent_root(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, double xtol, int max_iter) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw std::invalid_argument("brent_root: no sign change");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2 * 2.22e-16 * std::fabs(b) + 0.5 * xtol;
    double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        double qq = fa / fc, rr = fb / fc;
        p = s * (2 * xm * qq * (qq - rr) - (b - a) * (rr - 1));
        q = (qq - 1) * (rr - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::fabs(p);
      if (2 * p < std::min(3 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

}  // namespace mpspec
