"""Spectra, nodal classes and bifurcation branches of multi-point
Sturm-Liouville problems -u'' = lambda r(x) u on (-1,1).

Every operation takes the problem description either as a JSON string or as
a plain dict with the same shape; reports come back as plain dicts matching
the CLI payloads.
"""

import functools as _functools
import json as _json

from . import _core


def _as_text(problem):
    if isinstance(problem, str):
        return problem
    return _json.dumps(problem)


def _wrap(fn):
    @_functools.wraps(fn)
    def call(problem, *args, **kwargs):
        return fn(_as_text(problem), *args, **kwargs)

    return call


version = _core.version
run_example1 = _core.run_example1
run_example2 = _core.run_example2

parse_problem = _wrap(_core.parse_problem)
compute_spectrum = _wrap(_core.compute_spectrum)
characteristic_determinant = _wrap(_core.characteristic_determinant)
scan_determinant = _wrap(_core.scan_determinant)
oracle_spectrum = _wrap(_core.oracle_spectrum)
multiplicity_at = _wrap(_core.multiplicity_at)
check_interlacing = _wrap(_core.check_interlacing)
compute_constants = _wrap(_core.compute_constants)
solve_fixed = _wrap(_core.solve_fixed)
crossing_check = _wrap(_core.crossing_check)
branch_continue = _wrap(_core.branch_continue)
find_nodal_solution = _wrap(_core.find_nodal_solution)

__all__ = [
    "version",
    "parse_problem",
    "compute_spectrum",
    "characteristic_determinant",
    "scan_determinant",
    "oracle_spectrum",
    "multiplicity_at",
    "check_interlacing",
    "compute_constants",
    "solve_fixed",
    "crossing_check",
    "branch_continue",
    "find_nodal_solution",
    "run_example1",
    "run_example2",
]
__version__ = version()
