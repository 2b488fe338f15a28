import math

import pytest

import mpspec

HALF = {
    "r": "1",
    "bc_minus": {"alphas": [0.5], "etas": [0.0]},
    "bc_plus": {"alphas": [0.5], "etas": [0.0]},
}

DIRICHLET = {
    "r": "1",
    "bc_minus": {"alphas": [], "etas": []},
    "bc_plus": {"alphas": [], "etas": []},
}

CROSSING = {
    "r": "1",
    "g_product": {"r": "1", "gtilde": "(1 + 15*u^2) / (1 + u^2)"},
    "bc_minus": {"alphas": [], "etas": []},
    "bc_plus": {"alphas": [], "etas": []},
}

FIXED = {
    "r": "1",
    "f": "sin(u) + x",
    "bc_minus": {"alphas": [0.3], "etas": [0.0]},
    "bc_plus": {"alphas": [0.3], "etas": [0.0]},
}


def test_version():
    assert mpspec.version() == mpspec.__version__
    assert mpspec.version().count(".") == 2


def test_parse_problem_round_trip():
    p = mpspec.parse_problem(
        """
        {
          "r": {"kind": "expression", "body": "2 - cos(pi*x/2)"},
          "bc_minus": {"alphas": [0.3], "etas": [-0.5]},
          "bc_plus": {"alphas": [0.5], "etas": [0.0]}
        }
        """
    )
    assert p["r"]["kind"] == "expression"
    assert p["bc_plus"]["alphas"] == [0.5]
    assert p["bc_minus"]["etas"] == [-0.5]


def test_parse_problem_accepts_dict():
    p = mpspec.parse_problem(HALF)
    assert p["bc_plus"]["alphas"] == [0.5]


def test_spectrum_known_values():
    sr = mpspec.compute_spectrum(HALF, kmax=3)
    lams = [pair["lambda"] for pair in sr["eigenvalues"]]
    expected = [1.0966227112318834, 9.869604401082855, 27.415567780811077]
    for got, want in zip(lams, expected):
        assert abs(got - want) < 1e-7 * want
    assert all(pair["simple"] for pair in sr["eigenvalues"])
    assert sr["eigenvalues"][0]["nodal_class"] == "T_1^+"


def test_dirichlet_spectrum_closed_form():
    sr = mpspec.compute_spectrum(DIRICHLET, kmax=4)
    for k, pair in enumerate(sr["eigenvalues"], start=1):
        want = (k * math.pi / 2.0) ** 2
        assert abs(pair["lambda"] - want) < 1e-8 * want


def test_oracle_agrees_with_spectrum():
    sr = mpspec.compute_spectrum(HALF, kmax=3)
    orc = mpspec.oracle_spectrum(HALF, n=400, kmax=3)
    for pair, lam_fd in zip(sr["eigenvalues"], orc["eigenvalues"]):
        assert abs(pair["lambda"] - lam_fd) < 1e-3 * max(1.0, lam_fd)


def test_determinant_and_scan():
    sr = mpspec.compute_spectrum(HALF, kmax=2)
    lam1 = sr["eigenvalues"][0]["lambda"]
    assert abs(mpspec.characteristic_determinant(HALF, lam1)) < 1e-8
    scan = mpspec.scan_determinant(HALF, 0.5, 12.0, grid=300)
    assert any(abs(root - lam1) < 1e-6 for root in scan["roots"])


def test_interlacing_report():
    rep = mpspec.check_interlacing(HALF, kmax=4)
    mus, lams = rep["mu"], rep["lambda"]
    assert rep["interlaced"]
    for k in range(4):
        assert mus[k] < lams[k] < mus[k + 1]


def test_constants_with_and_without_g():
    plain = mpspec.compute_constants(HALF)
    assert plain["apriori"]["a1"] > 0.9
    assert plain["nonlinear"] is None
    with_g = mpspec.compute_constants(CROSSING)
    assert with_g["nonlinear"]["g_min"] > 0.9
    assert with_g["nonlinear"]["g_max"] < 16.1


def test_solve_fixed_samples():
    sol = mpspec.solve_fixed(FIXED)
    assert sol["residual_inf"] < 1e-8
    assert len(sol["x"]) == len(sol["u"]) > 10
    assert sol["x"][0] == -1.0 and sol["x"][-1] == 1.0
    # boundary values match the multi-point condition u(+-1) = 0.3 u(0)
    mid = sol["u"][sol["x"].index(0.0)] if 0.0 in sol["x"] else None
    if mid is not None:
        assert abs(sol["u"][0] - 0.3 * mid) < 1e-8
        assert abs(sol["u"][-1] - 0.3 * mid) < 1e-8


def test_crossing_and_branch():
    cr = mpspec.crossing_check(CROSSING, k=1)
    assert cr["crosses"]
    assert abs(cr["lambda_k_0"] - (math.pi / 2.0) ** 2 / 1.0) < 1e-6
    br = mpspec.branch_continue(CROSSING, k=1, nu=1, target_lambda=1.0)
    assert br["status"] == "reached_target"
    assert abs(br["final_lambda"] - 1.0) < 1e-10
    assert len(br["mesh"]) == len(br["final_u"])


def test_find_nodal_solution():
    sol = mpspec.find_nodal_solution(CROSSING, k=1, nu=1)
    assert sol["lambda"] == 1.0
    assert sol["residual_inf"] < 1e-8
    assert sol["nodal_class"] == "T_1^+"
    with pytest.raises(ValueError):
        mpspec.find_nodal_solution(CROSSING, k=1, nu=2)


def test_gap_scenario():
    rep = mpspec.run_example1(0.3)
    assert rep["gap_certified"]
    assert rep["eigenvalues_found"] == []
    assert len(rep["decoupled_roots"]) >= 3
