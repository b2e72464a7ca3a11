"""Sparse-grid stochastic collocation for lognormal diffusion problems."""

from ._sgc import (
    SparseGrid,
    combination_coefficients,
    delta_norm_profile,
    gaussian_leja,
    hermite_eval,
    kappa_tau,
    reduced_margin,
    rule,
    run_bench,
    sample_paths,
    smolyak_set,
    solve_lognormal,
    variance_coverage,
)

__all__ = [
    "SparseGrid",
    "combination_coefficients",
    "delta_norm_profile",
    "gaussian_leja",
    "hermite_eval",
    "kappa_tau",
    "reduced_margin",
    "rule",
    "run_bench",
    "sample_paths",
    "smolyak_set",
    "solve_lognormal",
    "variance_coverage",
]
