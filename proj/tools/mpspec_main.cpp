// Command-line surface. One subcommand per process; results go to stdout as
// JSON (or to --out), plot-ready tables go to CSV. Exit codes: 0 success,
// 1 computation failure, 2 usage error.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "mpspec/json_io.hpp"
#include "mpspec/nodal.hpp"
#include "mpspec/nonlinear.hpp"
#include "mpspec/scenarios.hpp"

using namespace mpspec;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Problem load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const std::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
}

ojson make_doc(const std::string& command) {
  ojson doc;
  doc["schema_version"] = 1;
  doc["command"] = command;
  return doc;
}

void emit(const ojson& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file '" + out + "'");
  os << doc.dump(2) << "\n";
}

void merge_into(ojson& doc, const ojson& payload) {
  for (const auto& [key, val] : payload.items()) doc[key] = val;
}

void merge_into_except_points(ojson& doc, const ojson& payload) {
  for (const auto& [key, val] : payload.items())
    if (key != "points") doc[key] = val;
}

int parse_nu(const std::string& s) {
  if (s == "plus") return +1;
  if (s == "minus") return -1;
  throw UsageError("--nu must be 'plus' or 'minus'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for multi-point boundary value problems"};
  app.require_subcommand(1);

  std::string config, out, format = "json";
  int kmax = 4;
  double tol = 1e-6;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config, "problem instance JSON file");
    if (needs_config) opt->required();
    cmd->add_option("--out", out, "write the result here instead of stdout");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    return cmd;
  };

  auto* cmd_spectrum = add_common(app.add_subcommand(
      "spectrum", "first kmax eigenpairs with certificates"), true);
  cmd_spectrum->add_option("--kmax", kmax, "number of eigenpairs");

  auto* cmd_classify = add_common(app.add_subcommand(
      "classify", "nodal classes of the first kmax eigenfunctions"), true);
  cmd_classify->add_option("--kmax", kmax, "number of eigenpairs");

  int bounds_grid = 4001;
  auto* cmd_bounds = add_common(app.add_subcommand(
      "bounds", "a-priori constants of the weight (and nonlinearity)"), true);
  cmd_bounds->add_option("--grid", bounds_grid, "extrema sampling grid");

  int oracle_n = 2000;
  auto* cmd_oracle = add_common(app.add_subcommand(
      "oracle", "finite-difference reference eigenvalues"), true);
  cmd_oracle->add_option("--kmax", kmax, "number of eigenvalues");
  cmd_oracle->add_option("--oracle-n", oracle_n, "mesh intervals");

  auto* cmd_interlace = add_common(app.add_subcommand(
      "interlace", "separated-reference interlacing check"), true);
  cmd_interlace->add_option("--kmax", kmax, "number of eigenvalues");

  auto* cmd_nonres = add_common(app.add_subcommand(
      "nonres", "solve the fixed problem at lambda = 1"), true);
  cmd_nonres->add_option("--tol", tol, "residual acceptance threshold");

  int branch_k = 1;
  std::string nu_str = "plus";
  double target_lambda = 1.0;
  double window_lo = 0.0, window_hi = 0.0;
  auto* cmd_branch = add_common(app.add_subcommand(
      "branch", "trace a bifurcation branch; writes points and solution CSVs"), true);
  cmd_branch->add_option("--k", branch_k, "nodal class index")->required();
  cmd_branch->add_option("--nu", nu_str, "class sign, plus or minus");
  cmd_branch->add_option("--target-lambda", target_lambda, "stop at this lambda");
  cmd_branch->add_option("--window-lo", window_lo, "lambda window lower edge");
  cmd_branch->add_option("--window-hi", window_hi, "lambda window upper edge");

  auto* cmd_nodal = add_common(app.add_subcommand(
      "nodal-solve", "nodal solution at lambda = 1 via the crossing branch"), true);
  cmd_nodal->add_option("--k", branch_k, "nodal class index")->required();
  cmd_nodal->add_option("--nu", nu_str, "class sign, plus or minus");
  cmd_nodal->add_option("--tol", tol, "residual acceptance threshold");

  std::string which;
  double delta = 0.25, smoothing = 0.0;
  auto* cmd_scenario = app.add_subcommand(
      "scenario", "turn-key study instances with certificates");
  cmd_scenario->add_option("which", which, "example1 or example2")
      ->required()
      ->check(CLI::IsMember({"example1", "example2"}));
  cmd_scenario->add_option("--delta", delta, "plateau half width (example1)");
  cmd_scenario->add_option("--smoothing", smoothing, "C1 ramp width (example1)");
  cmd_scenario->add_option("--out", out, "scan CSV path (example1) or JSON path");
  cmd_scenario->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  int scan_grid = 600;
  double scan_lo = 0.0, scan_hi = 0.0;
  auto* cmd_scan = add_common(app.add_subcommand(
      "scan", "characteristic determinant scan over a lambda window"), true);
  cmd_scan->add_option("--lo", scan_lo, "window lower edge")->required();
  cmd_scan->add_option("--hi", scan_hi, "window upper edge")->required();
  cmd_scan->add_option("--grid", scan_grid, "scan grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_spectrum->parsed() || cmd_classify->parsed()) {
      Problem p = load_problem(config);
      SpectrumResult sr = compute_spectrum(p, kmax);
      if (cmd_spectrum->parsed()) {
        ojson doc = make_doc("spectrum");
        merge_into(doc, to_ojson(sr));
        emit(doc, out);
      } else {
        ojson doc = make_doc("classify");
        doc["pairs"] = ojson::array();
        for (const auto& pair : sr.pairs) {
          double lam = pair.lambda;
          const Coefficient& r = p.r;
          NodalResult nr = classify(pair.eigfun, 0, 1, [&](double x) {
            return -lam * r.value(x) * pair.eigfun.value(x, 0);
          });
          ojson pj;
          pj["k"] = pair.k;
          pj["lambda"] = pair.lambda;
          if (nr.ok()) {
            pj["nodal_class"] = nr.cls->name();
            pj["zeros_of_up"] = nr.cls->zeros_of_up;
            pj["sign_changes_of_u"] = nr.cls->sign_changes_of_u;
          } else {
            pj["nodal_class"] = nullptr;
            pj["reason"] = to_string(nr.reason);
          }
          doc["pairs"].push_back(pj);
        }
        doc["warnings"] = sr.warnings;
        emit(doc, out);
      }
    } else if (cmd_bounds->parsed()) {
      Problem p = load_problem(config);
      ojson doc = make_doc("bounds");
      doc["constants"] = to_ojson(compute_constants(p.r, bounds_grid));
      if (p.g.has_value())
        doc["nonlinear"] = to_ojson(nonlinear_constants(*p.g));
      else
        doc["nonlinear"] = nullptr;
      emit(doc, out);
    } else if (cmd_oracle->parsed()) {
      Problem p = load_problem(config);
      ojson doc = make_doc("oracle");
      merge_into(doc, to_ojson(oracle_spectrum(p, oracle_n, kmax)));
      emit(doc, out);
    } else if (cmd_interlace->parsed()) {
      Problem p = load_problem(config);
      ojson doc = make_doc("interlace");
      merge_into(doc, to_ojson(check_interlacing(p, kmax)));
      emit(doc, out);
    } else if (cmd_nonres->parsed()) {
      Problem p = load_problem(config);
      BVPSolution sol = solve_fixed(p);
      ojson doc = make_doc("nonres");
      merge_into(doc, to_ojson(sol));
      if (format == "csv" && !out.empty()) {
        write_solution_csv(sol, out);
        std::cout << doc.dump(2) << "\n";
      } else {
        emit(doc, out);
      }
      if (sol.residual_inf > tol) {
        std::cerr << "error: residual " << sol.residual_inf
                  << " above threshold " << tol << "\n";
        return 1;
      }
    } else if (cmd_branch->parsed()) {
      Problem p = load_problem(config);
      int nu = parse_nu(nu_str);
      std::pair<double, double> window{window_lo, window_hi};
      if (window_hi <= window_lo) {
        // default window brackets the bifurcation point and the target
        CrossingReport cr = crossing_check(p, branch_k);
        double origin = cr.lambda_k_0;
        window = {0.5 * std::min(origin, target_lambda),
                  2.0 * std::max(origin, target_lambda) + 1.0};
      }
      Branch br = branch_continue(p, branch_k, nu, window, target_lambda);
      std::string base = out.empty() ? "branch_out" : out;
      write_branch_csv(br, base + ".points.csv");
      if (!br.points.empty()) {
        std::ofstream os(base + ".solution.csv");
        os.precision(17);
        os << "x,u\n";
        const auto& last = br.points.back();
        for (size_t i = 0; i < br.mesh.size(); ++i)
          os << br.mesh[i] << "," << last.u[i] << "\n";
      }
      ojson doc = make_doc("branch");
      merge_into_except_points(doc, to_ojson(br));
      doc["points_written"] = br.points.size();
      doc["points_csv"] = base + ".points.csv";
      doc["solution_csv"] = base + ".solution.csv";
      if (!br.points.empty()) {
        doc["final_lambda"] = br.points.back().lambda;
        doc["final_sup_norm"] = br.points.back().sup_norm;
      }
      std::cout << doc.dump(2) << "\n";
      if (br.status == BranchStatus::step_failure) return 1;
    } else if (cmd_nodal->parsed()) {
      Problem p = load_problem(config);
      int nu = parse_nu(nu_str);
      BVPSolution sol = find_nodal_solution(p, branch_k, nu);
      ojson doc = make_doc("nodal-solve");
      merge_into(doc, to_ojson(sol));
      if (format == "csv" && !out.empty()) {
        write_solution_csv(sol, out);
        std::cout << doc.dump(2) << "\n";
      } else {
        emit(doc, out);
      }
      if (sol.residual_inf > tol) {
        std::cerr << "error: residual " << sol.residual_inf
                  << " above threshold " << tol << "\n";
        return 1;
      }
    } else if (cmd_scenario->parsed()) {
      if (which == "example1") {
        GapReport rep = run_example1(delta, smoothing);
        ojson doc = make_doc("scenario example1");
        merge_into(doc, to_ojson(rep));
        if (!out.empty() && format == "csv") {
          write_scan_csv(rep, out);
          doc["scan_csv"] = out;
          std::cout << doc.dump(2) << "\n";
        } else {
          emit(doc, out);
        }
      } else {
        DoubleEigenReport rep = run_example2();
        ojson doc = make_doc("scenario example2");
        merge_into(doc, to_ojson(rep));
        emit(doc, out);
      }
    } else if (cmd_scan->parsed()) {
      Problem p = load_problem(config);
      if (!(scan_hi > scan_lo)) throw UsageError("--hi must exceed --lo");
      ojson doc = make_doc("scan");
      doc["lo"] = scan_lo;
      doc["hi"] = scan_hi;
      doc["grid"] = scan_grid;
      merge_into(doc, to_ojson(scan_determinant(p, scan_lo, scan_hi, scan_grid)));
      emit(doc, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
