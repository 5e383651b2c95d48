"""eps-regularized pseudo-Riemannian geometry: metrics, connections,
curvature, geodesic families and their distributional limits."""

from ._core import (
    ConfigError,
    EvalError,
    NumericalError,
    check_nondegenerate,
    christoffel_symbols,
    compute_index,
    curvature_at,
    differentiate,
    estimate_shadow,
    evaluate,
    geodesic_family,
    geometric_grid,
    inverse_metric_at,
    list_scenarios,
    metric_eigenvalues,
    pair_delta_density,
    run_acceptance,
    scenario_json,
)

__all__ = [
    "ConfigError",
    "EvalError",
    "NumericalError",
    "check_nondegenerate",
    "christoffel_symbols",
    "compute_index",
    "curvature_at",
    "differentiate",
    "estimate_shadow",
    "evaluate",
    "geodesic_family",
    "geometric_grid",
    "inverse_metric_at",
    "list_scenarios",
    "metric_eigenvalues",
    "pair_delta_density",
    "run_acceptance",
    "scenario_json",
]

__version__ = "0.1.0"
