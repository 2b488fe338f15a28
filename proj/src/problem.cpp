#include "mpspec/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "mpspec/bounds.hpp"

namespace mpspec {

using nlohmann::ordered_json;

double MultiPointCondition::alpha_norm() const {
  double s = 0.0;
  for (double a : alphas) s += std::fabs(a);
  return s;
}

static void check_mp(const MultiPointCondition& mc, int side) {
  if (mc.alphas.size() != mc.etas.size())
    throw std::invalid_argument("alphas and etas must have the same length");
  for (double eta : mc.etas) {
    if (!(eta >= -1.0 && eta <= 1.0))
      throw std::invalid_argument("eta outside [-1,1]");
    if (side > 0 && eta == 1.0)
      throw std::invalid_argument("eta = 1 is not allowed in the condition at x = 1");
    if (side < 0 && eta == -1.0)
      throw std::invalid_argument("eta = -1 is not allowed in the condition at x = -1");
  }
}

Problem make_problem(ProblemSpec spec) {
  Problem p;
  check_mp(spec.bc_plus, +1);
  spec.bc_plus.side = +1;
  if (auto* mc = std::get_if<MultiPointCondition>(&spec.bc_minus)) {
    check_mp(*mc, -1);
    mc->side = -1;
  } else {
    const auto& sc = std::get<SeparatedCondition>(spec.bc_minus);
    if (sc.c0 == 0.0 && sc.c1 == 0.0)
      throw std::invalid_argument("separated condition needs (c0,c1) != (0,0)");
  }
  p.r = Coefficient::from_spec(spec.r);
  if (spec.g_product) {
    p.g_r_part = Coefficient::from_spec(spec.g_product->first);
    p.g_tilde_part = Coefficient::from_spec(spec.g_product->second);
    p.g = Coefficient::product(*p.g_r_part, *p.g_tilde_part);
  } else if (spec.g) {
    p.g = Coefficient::from_spec(*spec.g);
  }
  if (spec.f) p.f = Coefficient::from_spec(*spec.f);
  p.spec = std::move(spec);
  return p;
}

// ------------------------------------------------------------------ JSON

static CoefficientSpec coef_from_json(const ordered_json& j, const std::string& where) {
  CoefficientSpec c;
  if (j.is_string()) {  // shorthand for an expression body
    c.kind = "expression";
    c.body = j.get<std::string>();
    return c;
  }
  if (!j.is_object()) throw std::invalid_argument(where + ": coefficient must be an object");
  c.kind = j.value("kind", "expression");
  if (c.kind == "expression" || c.kind == "builtin") {
    if (!j.contains("body")) throw std::invalid_argument(where + ": missing 'body'");
    c.body = j.at("body").get<std::string>();
  } else if (c.kind == "piecewise" || c.kind == "piecewise-smooth") {
    c.breaks = j.at("breaks").get<std::vector<double>>();
    c.values = j.at("values").get<std::vector<double>>();
    c.smoothing_width = j.value("smoothing_width", 0.0);
  } else {
    throw std::invalid_argument(where + ": unknown coefficient kind '" + c.kind + "'");
  }
  return c;
}

static ordered_json coef_to_json(const CoefficientSpec& c) {
  ordered_json j;
  j["kind"] = c.kind;
  if (c.kind == "piecewise" || c.kind == "piecewise-smooth") {
    j["breaks"] = c.breaks;
    j["values"] = c.values;
    j["smoothing_width"] = c.smoothing_width;
  } else {
    j["body"] = c.body;
  }
  return j;
}

Problem parse_problem(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ProblemSpec spec;
  if (!j.contains("r")) throw std::invalid_argument("config is missing 'r'");
  spec.r = coef_from_json(j.at("r"), "r");

  auto mp_from_json = [](const ordered_json& b, int side, const std::string& where) {
    MultiPointCondition mc;
    mc.side = side;
    mc.alphas = b.value("alphas", std::vector<double>{});
    mc.etas = b.value("etas", std::vector<double>{});
    if (b.contains("alphas") != b.contains("etas"))
      throw std::invalid_argument(where + ": give both 'alphas' and 'etas' or neither");
    return mc;
  };

  if (!j.contains("bc_plus")) throw std::invalid_argument("config is missing 'bc_plus'");
  spec.bc_plus = mp_from_json(j.at("bc_plus"), +1, "bc_plus");

  if (!j.contains("bc_minus")) throw std::invalid_argument("config is missing 'bc_minus'");
  const auto& bm = j.at("bc_minus");
  if (bm.contains("c0") || bm.contains("c1")) {
    SeparatedCondition sc;
    sc.c0 = bm.value("c0", 0.0);
    sc.c1 = bm.value("c1", 0.0);
    spec.bc_minus = sc;
  } else {
    spec.bc_minus = mp_from_json(bm, -1, "bc_minus");
  }

  if (j.contains("g")) spec.g = coef_from_json(j.at("g"), "g");
  if (j.contains("f")) spec.f = coef_from_json(j.at("f"), "f");
  if (j.contains("g_product")) {
    const auto& gp = j.at("g_product");
    spec.g_product = std::make_pair(coef_from_json(gp.at("r"), "g_product.r"),
                                    coef_from_json(gp.at("gtilde"), "g_product.gtilde"));
  }
  return make_problem(std::move(spec));
}

std::string serialize_problem(const Problem& p, int indent) {
  ordered_json j;
  j["r"] = coef_to_json(p.spec.r);
  if (p.separated_minus()) {
    const auto& sc = p.sep_minus();
    j["bc_minus"] = ordered_json{{"c0", sc.c0}, {"c1", sc.c1}};
  } else {
    const auto& mc = p.mp_minus();
    j["bc_minus"] = ordered_json{{"alphas", mc.alphas}, {"etas", mc.etas}};
  }
  j["bc_plus"] = ordered_json{{"alphas", p.spec.bc_plus.alphas}, {"etas", p.spec.bc_plus.etas}};
  if (p.spec.g_product) {
    j["g_product"] = ordered_json{{"r", coef_to_json(p.spec.g_product->first)},
                                  {"gtilde", coef_to_json(p.spec.g_product->second)}};
  } else if (p.spec.g) {
    j["g"] = coef_to_json(*p.spec.g);
  }
  if (p.spec.f) j["f"] = coef_to_json(*p.spec.f);
  return j.dump(indent);
}

// ------------------------------------------------------------- validation

ValidationReport validate(const Problem& p, int grid) {
  ValidationReport rep;
  if (grid < 3) grid = 3;

  if (p.r.depends_on_u()) {
    rep.messages.push_back("r must not depend on u");
    return rep;
  }

  double rmin = 1e300, rmax = -1e300;
  bool finite = true;
  for (int i = 0; i < grid; ++i) {
    double x = -1.0 + 2.0 * i / (grid - 1);
    double v = p.r.value(x);
    double d = p.r.derivative(x);
    if (!std::isfinite(v) || !std::isfinite(d)) {
      finite = false;
      break;
    }
    rmin = std::min(rmin, v);
    rmax = std::max(rmax, v);
  }
  if (!finite) {
    rep.messages.push_back("r or r' is not finite on the sampling grid");
    return rep;
  }
  rep.r_min_sampled = rmin;
  rep.r_max_sampled = rmax;
  rep.r_positive = rmin > 0.0;
  if (!rep.r_positive) {
    rep.messages.push_back("r must be strictly positive on [-1,1]");
    return rep;
  }

  rep.a1 = compute_constants(p.r).a1;

  rep.alpha_norm_plus = p.spec.bc_plus.alpha_norm();
  rep.plus_below_one = rep.alpha_norm_plus < 1.0;
  rep.plus_below_a1 = rep.alpha_norm_plus < rep.a1;
  if (!p.separated_minus()) {
    rep.alpha_norm_minus = p.mp_minus().alpha_norm();
    rep.minus_below_one = rep.alpha_norm_minus < 1.0;
    rep.minus_below_a1 = rep.alpha_norm_minus < rep.a1;
  } else {
    rep.minus_below_one = true;
    rep.minus_below_a1 = true;
  }
  if (!rep.plus_below_one) rep.messages.push_back("|alpha+| >= 1: spectral theory not applicable");
  if (!rep.minus_below_one) rep.messages.push_back("|alpha-| >= 1: spectral theory not applicable");

  if (p.g) {
    double gmin = 1e300;
    const double us[] = {0.0, 0.5, -0.5, 1.0, -1.0, 10.0, -10.0, 1e3, -1e3};
    for (int i = 0; i < grid; i += 8) {
      double x = -1.0 + 2.0 * i / (grid - 1);
      for (double u : us) {
        double v = p.g->value2(x, u);
        if (!std::isfinite(v)) {
          gmin = -1e300;
          break;
        }
        gmin = std::min(gmin, v);
      }
    }
    rep.g_positive = gmin > 0.0;
    if (!rep.g_positive) rep.messages.push_back("g is not strictly positive on the sample set");
  }

  rep.ok = rep.r_positive && rep.plus_below_one && rep.minus_below_one && rep.g_positive;
  return rep;
}

}  // namespace mpspec
