#include "mpspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

extern "C" {
void dgeev_(const char* jobvl, const char* jobvr, const int* n, double* a,
            const int* lda, double* wr, double* wi, double* vl, const int* ldvl,
            double* vr, const int* ldvr, double* work, const int* lwork, int* info);
}

namespace mpspec {

namespace {

// linear form c0 * u_0 + cM * u_{N+1} + sum_j p[j] u_{j+1} representing one
// endpoint equation's right-hand side
struct EndpointForm {
  double c0 = 0.0, cM = 0.0;
  std::vector<double> p;
};

void add_interp(EndpointForm& f, double eta, double weight, int N, double h,
                std::vector<std::string>& notes, const char* side) {
  // u(eta) by linear interpolation between the two flanking grid nodes
  double t = (eta + 1.0) / h;
  int j0 = static_cast<int>(std::floor(t));
  if (j0 > N) j0 = N;  // eta = +1 lands on node N+1
  if (j0 < 0) j0 = 0;
  double frac = t - j0;
  if (std::fabs(frac) < 1e-12) {
    notes.push_back(std::string(side) + " eta on grid node");
    frac = 0.0;
  } else {
    notes.push_back(std::string(side) + " eta interpolated");
  }
  auto put = [&](int idx, double w) {
    if (w == 0.0) return;
    if (idx == 0)
      f.c0 += w;
    else if (idx == N + 1)
      f.cM += w;
    else
      f.p[idx - 1] += w;
  };
  put(j0, weight * (1.0 - frac));
  if (frac != 0.0) put(j0 + 1, weight * frac);
}

}  // namespace

DiscreteSystem discretize(const Problem& p, int N) {
  if (N < 3) throw std::invalid_argument("oracle grid too small");
  DiscreteSystem d;
  d.N = N;
  double h = 2.0 / (N + 1);

  EndpointForm fm, fp;  // u_0 = fm(u), u_{N+1} = fp(u)
  fm.p.assign(N, 0.0);
  fp.p.assign(N, 0.0);

  if (p.separated_minus()) {
    // c0 u(-1) + c1 u'(-1) = 0 with the one-sided second-order derivative
    // u'(-1) ~ (-3 u_0 + 4 u_1 - u_2) / (2h)
    const SeparatedCondition& sc = p.sep_minus();
    double den = 3.0 * sc.c1 - 2.0 * h * sc.c0;
    if (std::fabs(den) < 1e-12 * (std::fabs(sc.c0) + std::fabs(sc.c1)))
      throw std::invalid_argument("endpoint elimination singular (separated)");
    fm.p[0] = 4.0 * sc.c1 / den;
    fm.p[1] = -sc.c1 / den;
  } else {
    const MultiPointCondition& bc = p.mp_minus();
    for (std::size_t i = 0; i < bc.alphas.size(); ++i)
      add_interp(fm, bc.etas[i], bc.alphas[i], N, h, d.notes, "minus");
  }
  {
    const MultiPointCondition& bc = p.mp_plus();
    for (std::size_t i = 0; i < bc.alphas.size(); ++i)
      add_interp(fp, bc.etas[i], bc.alphas[i], N, h, d.notes, "plus");
  }

  // solve the 2x2 coupling   (1 - c0m) u_0 - cMm u_{N+1} = pm . u
  //                          -c0p u_0 + (1 - cMp) u_{N+1} = pp . u
  double a = 1.0 - fm.c0, b = -fm.cM;
  double c = -fp.c0, dd = 1.0 - fp.cM;
  double det = a * dd - b * c;
  if (std::fabs(det) < 1e-12)
    throw std::invalid_argument("endpoint elimination singular");
  std::vector<double> q0(N), qM(N);
  for (int j = 0; j < N; ++j) {
    q0[j] = (dd * fm.p[j] - b * fp.p[j]) / det;
    qM[j] = (-c * fm.p[j] + a * fp.p[j]) / det;
  }

  d.A.assign(static_cast<std::size_t>(N) * N, 0.0);
  double ih2 = 1.0 / (h * h);
  for (int i = 0; i < N; ++i) {
    d.A[static_cast<std::size_t>(i) * N + i] = 2.0 * ih2;
    if (i > 0) d.A[static_cast<std::size_t>(i) * N + i - 1] = -ih2;
    if (i + 1 < N) d.A[static_cast<std::size_t>(i) * N + i + 1] = -ih2;
  }
  for (int j = 0; j < N; ++j) {
    d.A[static_cast<std::size_t>(0) * N + j] -= ih2 * q0[j];
    d.A[static_cast<std::size_t>(N - 1) * N + j] -= ih2 * qM[j];
  }

  d.B.resize(N);
  for (int j = 0; j < N; ++j) d.B[j] = p.r.value(-1.0 + (j + 1) * h);
  return d;
}

namespace {

// all accepted-real eigenvalues of B^{-1} A, ascending
std::vector<double> solve_all(const DiscreteSystem& d, std::vector<std::string>& warnings) {
  int n = d.N;
  // column-major input for LAPACK: M(i,j) = A(i,j) / B(i)
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m[static_cast<std::size_t>(j) * n + i] =
          d.A[static_cast<std::size_t>(i) * n + j] / d.B[i];

  std::vector<double> wr(n), wi(n);
  int info = 0, lwork = -1;
  double wk_query = 0.0;
  dgeev_("N", "N", &n, m.data(), &n, wr.data(), wi.data(), nullptr, &n, nullptr, &n,
         &wk_query, &lwork, &info);
  if (info != 0) throw std::runtime_error("eigen workspace query failed");
  lwork = static_cast<int>(wk_query);
  std::vector<double> work(lwork);
  dgeev_("N", "N", &n, m.data(), &n, wr.data(), wi.data(), nullptr, &n, nullptr, &n,
         work.data(), &lwork, &info);
  if (info != 0) throw std::runtime_error("eigen iteration failed to converge");

  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (std::fabs(wi[i]) <= 1e-8 * std::max(1.0, std::fabs(wr[i]))) {
      out.push_back(wr[i]);
    } else if (wi[i] > 0.0) {
      warnings.push_back("complex pair rejected near " + std::to_string(wr[i]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

OracleResult oracle_spectrum(const Problem& p, int N, int K) {
  DiscreteSystem d = discretize(p, N);
  OracleResult res;
  res.N = N;
  std::vector<double> all = solve_all(d, res.warnings);
  if (static_cast<int>(all.size()) < K)
    res.warnings.push_back("fewer real eigenvalues than requested");
  int take = std::min<int>(K, static_cast<int>(all.size()));
  res.eigenvalues.assign(all.begin(), all.begin() + take);
  return res;
}

int multiplicity_at(const Problem& p, double lambda_star, int N, double cluster_tol) {
  DiscreteSystem d = discretize(p, N);
  std::vector<std::string> warnings;
  std::vector<double> all = solve_all(d, warnings);
  double band = cluster_tol * std::max(1.0, std::fabs(lambda_star));
  int count = 0;
  for (double v : all)
    if (std::fabs(v - lambda_star) <= band) ++count;
  return count;
}

}  // namespace mpspec
