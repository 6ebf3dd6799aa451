"""Simulation and verification toolkit for loose Hamilton cycles in random
uniform hypergraphs.

Thin wrappers over the compiled ``_core`` extension; exact big-integer
results cross the boundary as decimal strings and are converted here.
"""

from ._core import (
    collect_spoiled_stats,
    count_loose_hamilton,
    count_perfect_matchings,
    critical_point,
    csv_strip_timestamp,
    derive_seed,
    expected_H_asym,
    find_loose_hamilton,
    find_perfect_matching,
    g,
    generate_gamma,
    generate_hnpk,
    grad_g,
    h,
    has_isolated_vertex,
    has_restricted_cycle,
    hc_probability_bound,
    hessian_det_closed_form,
    hessian_g,
    psi_y,
    recompose_probability,
    run_experiment,
    sample_lambda_d,
    split_probability,
    success_probability_bound,
    unspoiled_probability_asymptotic,
    variance_ratio_bound,
    variance_sum_upper,
    verify_global_max_text,
)
from ._core import a_2m_str as _a_2m_str
from ._core import n_b_str as _n_b_str

__version__ = "0.1.0"


def a_2m(m: int, d: int) -> int:
    """Exact number of 2m-cycles on the configuration points."""
    return int(_a_2m_str(m, d))


def n_b(m: int, d: int, b: int) -> int:
    """Exact count of compatible cycles sharing exactly b pairs."""
    return int(_n_b_str(m, d, b))


__all__ = [
    "a_2m",
    "collect_spoiled_stats",
    "count_loose_hamilton",
    "count_perfect_matchings",
    "critical_point",
    "csv_strip_timestamp",
    "derive_seed",
    "expected_H_asym",
    "find_loose_hamilton",
    "find_perfect_matching",
    "g",
    "generate_gamma",
    "generate_hnpk",
    "grad_g",
    "h",
    "has_isolated_vertex",
    "has_restricted_cycle",
    "hc_probability_bound",
    "hessian_det_closed_form",
    "hessian_g",
    "n_b",
    "psi_y",
    "recompose_probability",
    "run_experiment",
    "sample_lambda_d",
    "split_probability",
    "success_probability_bound",
    "unspoiled_probability_asymptotic",
    "variance_ratio_bound",
    "variance_sum_upper",
    "verify_global_max_text",
]
