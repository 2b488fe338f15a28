#include "mpspec/json_io.hpp"

#include "mpspec/nodal.hpp"

namespace mpspec {

const char* family_name(Family f) {
  return f == Family::energy ? "energy" : "slope";
}

ojson to_ojson(const EigenCertificates& c) {
  ojson j;
  j["nodal_class"] = c.nodal_class;
  j["simple"] = c.simple;
  j["residual_minus"] = c.residual_minus;
  j["residual_plus"] = c.residual_plus;
  return j;
}

ojson to_ojson(const Eigenpair& pair) {
  ojson j;
  j["k"] = pair.k;
  j["lambda"] = pair.lambda;
  j["theta"] = pair.theta;
  j["family"] = family_name(pair.family);
  j["jacobian_det"] = pair.jacobian.det;
  j["jacobian_scaled"] = pair.jacobian.normalized();
  j["certificates"] = to_ojson(pair.certificates);
  return j;
}

ojson to_ojson(const SpectrumResult& sr) {
  ojson j;
  j["method"] = sr.method;
  j["pairs"] = ojson::array();
  for (const auto& p : sr.pairs) j["pairs"].push_back(to_ojson(p));
  j["warnings"] = sr.warnings;
  return j;
}

ojson to_ojson(const OracleResult& orc) {
  ojson j;
  j["n"] = orc.N;
  j["eigenvalues"] = orc.eigenvalues;
  j["warnings"] = orc.warnings;
  return j;
}

ojson to_ojson(const ScanResult& scan) {
  ojson j;
  j["brackets"] = ojson::array();
  for (const auto& b : scan.brackets) j["brackets"].push_back({b.first, b.second});
  j["roots"] = scan.roots;
  j["even_candidates"] = scan.even_candidates;
  return j;
}

ojson to_ojson(const InterlacingReport& rep) {
  ojson j;
  j["mu"] = rep.mu;
  j["lambda"] = rep.lambda;
  j["ok"] = rep.ok;
  j["violations"] = rep.violations;
  return j;
}

ojson to_ojson(const AprioriConstants& c) {
  ojson j;
  j["r_min"] = c.r_min;
  j["r_max"] = c.r_max;
  j["rp_pos_max"] = c.rp_pos_max;
  j["rp_neg_max"] = c.rp_neg_max;
  j["c_min"] = c.c_min;
  j["c_max"] = c.c_max;
  j["a1"] = c.a1;
  j["c1"] = c.c1;
  j["c2"] = c.c2;
  j["c3"] = c.c3;
  j["c4"] = c.c4;
  j["Lambda1"] = c.Lambda1;
  j["Lambda2"] = c.Lambda2;
  j["Lambda3"] = c.Lambda3;
  j["grid"] = c.grid;
  j["safety"] = c.safety;
  return j;
}

ojson to_ojson(const NonlinearConstants& c) {
  ojson j;
  j["g_min"] = c.g_min;
  j["g_max"] = c.g_max;
  j["C1"] = c.C1;
  j["C2"] = c.C2;
  j["U"] = c.U;
  return j;
}

ojson to_ojson(const BVPSolution& sol) {
  ojson j;
  j["lambda"] = sol.lambda;
  j["sup_norm"] = sol.samples.sup_abs(0);
  j["residual_inf"] = sol.residual_inf;
  if (sol.nodal.ok()) {
    j["nodal_class"] = sol.nodal.cls->name();
  } else {
    j["nodal_class"] = nullptr;
    j["nodal_reason"] = to_string(sol.nodal.reason);
  }
  j["u_minus1"] = sol.samples.value(-1.0, 0);
  j["u_plus1"] = sol.samples.value(1.0, 0);
  j["notes"] = sol.notes;
  return j;
}

ojson to_ojson(const CrossingReport& cr) {
  ojson j;
  j["lambda_k_0"] = cr.lambda_k_0;
  j["lambda_k_inf"] = cr.lambda_k_inf;
  j["crosses"] = cr.crosses;
  return j;
}

ojson to_ojson(const Branch& br) {
  ojson j;
  j["k"] = br.k;
  j["nu"] = br.nu;
  j["origin"] = br.origin;
  j["status"] = to_string(br.status);
  j["points"] = ojson::array();
  for (const auto& pt : br.points) j["points"].push_back({pt.lambda, pt.sup_norm});
  j["notes"] = br.notes;
  return j;
}

ojson to_ojson(const GapReport& rep) {
  ojson j;
  j["delta"] = rep.delta;
  j["smoothing"] = rep.smoothing;
  j["interval"] = {rep.interval.first, rep.interval.second};
  j["scanned"] = {rep.scanned.first, rep.scanned.second};
  j["eigenvalues_found"] = rep.eigenvalues_found;
  j["decoupled_roots"] = rep.decoupled_roots;
  j["min_coupled_margin"] = rep.min_coupled_margin;
  j["gap_certified"] = rep.gap_certified;
  j["energy_chain_ok"] = rep.energy_chain_ok;
  j["max_end_sq"] = rep.max_end_sq;
  j["max_chain_bound"] = rep.max_chain_bound;
  j["notes"] = rep.notes;
  return j;
}

ojson to_ojson(const DoubleEigenReport& rep) {
  ojson j;
  j["mu_D"] = rep.mu_D;
  j["alpha"] = rep.alpha;
  j["jacobian_det"] = rep.jacobian_det;
  j["oracle_multiplicity"] = rep.oracle_multiplicity;
  j["alpha_bound_ok"] = rep.alpha_bound_ok;
  j["energy_ratio"] = rep.energy_ratio;
  j["gram_det"] = rep.gram_det;
  j["odd_bc_residual_max"] = rep.odd_bc_residual_max;
  j["notes"] = rep.notes;
  return j;
}

}  // namespace mpspec
