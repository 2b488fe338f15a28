// Python bindings. The C++ side works with JSON-serializable report structs;
// here each operation takes the problem as a JSON string and returns plain
// python objects converted through nlohmann::json, so the python surface
// stays schema-identical to the CLI payloads. Solution-valued results
// additionally carry x/u sample arrays that the CLI writes to CSV instead.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>

#include "mpspec/characteristic.hpp"
#include "mpspec/json_io.hpp"
#include "mpspec/problem.hpp"

namespace py = pybind11;
using mpspec::ojson;

namespace {

py::object json_to_py(const ojson& j) {
  switch (j.type()) {
    case ojson::value_t::null:
      return py::none();
    case ojson::value_t::boolean:
      return py::bool_(j.get<bool>());
    case ojson::value_t::number_integer:
      return py::int_(j.get<long long>());
    case ojson::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case ojson::value_t::number_float:
      return py::float_(j.get<double>());
    case ojson::value_t::string:
      return py::str(j.get<std::string>());
    case ojson::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(json_to_py(v));
      return out;
    }
    case ojson::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default:
      return py::none();
  }
}

mpspec::Problem load(const std::string& text) {
  return mpspec::parse_problem(text);
}

int check_nu(int nu) {
  if (nu != 1 && nu != -1) throw std::invalid_argument("nu must be +1 or -1");
  return nu;
}

// BVPSolution dict plus the solution samples at the solver's own nodes.
py::object solution_to_py(const mpspec::BVPSolution& sol) {
  ojson j = mpspec::to_ojson(sol);
  ojson xs = ojson::array(), us = ojson::array();
  for (std::size_t i = 0; i < sol.samples.nodes(); ++i) {
    xs.push_back(sol.samples.xs()[i]);
    us.push_back(sol.samples.node_value(i, 0));
  }
  j["x"] = std::move(xs);
  j["u"] = std::move(us);
  return json_to_py(j);
}

py::object branch_to_py(const mpspec::Branch& br) {
  ojson j = mpspec::to_ojson(br);
  j["mesh"] = br.mesh;
  if (!br.points.empty()) {
    j["final_lambda"] = br.points.back().lambda;
    j["final_sup_norm"] = br.points.back().sup_norm;
    j["final_u"] = br.points.back().u;
  }
  return json_to_py(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "multi-point Sturm-Liouville spectra, nodal classes and branches";

  m.def("version", [] { return std::string("0.1.0"); });

  m.def(
      "parse_problem",
      [](const std::string& text) {
        mpspec::Problem p = load(text);
        return json_to_py(ojson::parse(mpspec::serialize_problem(p)));
      },
      py::arg("text"), "Validate a problem description and echo it normalized.");

  m.def(
      "compute_spectrum",
      [](const std::string& text, int kmax) {
        return json_to_py(mpspec::to_ojson(mpspec::compute_spectrum(load(text), kmax)));
      },
      py::arg("text"), py::arg("kmax") = 8,
      "First kmax eigenvalues with certificates and nodal classes.");

  m.def(
      "characteristic_determinant",
      [](const std::string& text, double lam) {
        return mpspec::characteristic_determinant(load(text), lam);
      },
      py::arg("text"), py::arg("lam"),
      "Determinant whose roots are the eigenvalues.");

  m.def(
      "scan_determinant",
      [](const std::string& text, double lo, double hi, int grid) {
        return json_to_py(
            mpspec::to_ojson(mpspec::scan_determinant(load(text), lo, hi, grid)));
      },
      py::arg("text"), py::arg("lo"), py::arg("hi"), py::arg("grid") = 600,
      "Sample the determinant on [lo, hi] and bisect its sign changes.");

  m.def(
      "oracle_spectrum",
      [](const std::string& text, int n, int kmax) {
        return json_to_py(mpspec::to_ojson(mpspec::oracle_spectrum(load(text), n, kmax)));
      },
      py::arg("text"), py::arg("n") = 2000, py::arg("kmax") = 8,
      "Finite-difference eigenvalues, independent of the shooting path.");

  m.def(
      "multiplicity_at",
      [](const std::string& text, double lambda_star, int n, double cluster_tol) {
        return mpspec::multiplicity_at(load(text), lambda_star, n, cluster_tol);
      },
      py::arg("text"), py::arg("lambda_star"), py::arg("n") = 2000,
      py::arg("cluster_tol") = 1e-4,
      "Number of discretized eigenvalues clustered at lambda_star.");

  m.def(
      "check_interlacing",
      [](const std::string& text, int kmax) {
        return json_to_py(mpspec::to_ojson(mpspec::check_interlacing(load(text), kmax)));
      },
      py::arg("text"), py::arg("kmax") = 8,
      "Eigenvalues against the Dirichlet-at-(-1) comparison sequence.");

  m.def(
      "compute_constants",
      [](const std::string& text, int grid) {
        mpspec::Problem p = load(text);
        ojson j;
        j["apriori"] = mpspec::to_ojson(mpspec::compute_constants(p.r, grid));
        if (p.g) {
          j["nonlinear"] = mpspec::to_ojson(mpspec::nonlinear_constants(*p.g));
        } else {
          j["nonlinear"] = nullptr;
        }
        return json_to_py(j);
      },
      py::arg("text"), py::arg("grid") = 4001,
      "A-priori constants of the weight, plus nonlinearity bounds when g is declared.");

  m.def(
      "solve_fixed",
      [](const std::string& text) { return solution_to_py(mpspec::solve_fixed(load(text))); },
      py::arg("text"),
      "Collocation solution of -u'' = f(x,u) under the multi-point conditions.");

  m.def(
      "crossing_check",
      [](const std::string& text, int k) {
        return json_to_py(mpspec::to_ojson(mpspec::crossing_check(load(text), k)));
      },
      py::arg("text"), py::arg("k") = 1,
      "Whether the k-th branch must cross lambda = 1 (origin vs asymptote).");

  m.def(
      "branch_continue",
      [](const std::string& text, int k, int nu, double target_lambda,
         std::optional<std::pair<double, double>> window, int max_points,
         double sup_cap) {
        mpspec::Problem p = load(text);
        check_nu(nu);
        std::pair<double, double> w;
        if (window) {
          w = *window;
        } else {
          double origin = mpspec::crossing_check(p, k).lambda_k_0;
          w = {0.5 * std::min(origin, target_lambda),
               2.0 * std::max(origin, target_lambda) + 1.0};
        }
        return branch_to_py(
            mpspec::branch_continue(p, k, nu, w, target_lambda, max_points, sup_cap));
      },
      py::arg("text"), py::arg("k"), py::arg("nu"), py::arg("target_lambda"),
      py::arg("window") = std::nullopt, py::arg("max_points") = 1500,
      py::arg("sup_cap") = 1e4,
      "Trace the bifurcation branch in T_k^nu toward target_lambda.");

  m.def(
      "find_nodal_solution",
      [](const std::string& text, int k, int nu) {
        check_nu(nu);
        return solution_to_py(mpspec::find_nodal_solution(load(text), k, nu));
      },
      py::arg("text"), py::arg("k"), py::arg("nu"),
      "Solution of -u'' = g(x,u) u in the nodal class T_k^nu.");

  m.def(
      "run_example1",
      [](double delta, double smoothing) {
        return json_to_py(mpspec::to_ojson(mpspec::run_example1(delta, smoothing)));
      },
      py::arg("delta"), py::arg("smoothing") = 0.0,
      "Spectral-gap window for the piecewise 4/1/4 weight.");

  m.def("run_example2",
        [] { return json_to_py(mpspec::to_ojson(mpspec::run_example2())); },
        "Double-eigenvalue construction for r = 2 - cos(pi x / 2).");
}
