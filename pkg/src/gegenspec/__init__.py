"""Gegenbauer interpolation, spectral differentiation and quadrature on
Gauss-type nodes, with machine-evaluable exponential-accuracy error bounds.

The quickest tour is demos/ at the repository root; the public surface is
re-exported here.
"""

from .special import (
    GegenbauerParam,
    ln_gamma,
    g_coeff,
    g_coeff_sequence,
    d_coeff,
    d_coeff_sequence,
    upper_incomplete_gamma_int,
    h_norm,
    total_mass,
)
from .poly import (
    eval_recurrence,
    recurrence_table,
    eval_derivative,
    eval_w_series,
    normalized_on_ellipse,
    value_at_one,
    max_abs_bound,
)
from .nodes import (
    GAUSS,
    GAUSS_LOBATTO,
    NodeSet,
    gauss_nodes,
    gauss_lobatto_nodes,
    quad_weights_interpolatory,
    barycentric_weights,
)
from .operators import (
    DiffMatrix,
    interpolate,
    diff_matrix,
    differentiate_at_nodes,
    expansion_coeffs,
    truncated_expansion_error,
)
from .bounds import (
    EllipseSpec,
    BoundBreakdown,
    PoleOnContourError,
    ellipse_points,
    ellipse_axes,
    interval_distance,
    perimeter_estimate,
    sup_on_ellipse,
    remainder_exact,
    remainder_bound,
    e_n_metric,
    interp_bound_gauss,
    diff_bound_gauss,
    interp_bound_lobatto,
    diff_bound_lobatto,
    quad_bound,
    best_bound_over_rho,
)
from .experiments import (
    ExperimentConfig,
    ExperimentRecord,
    TEST_FUNCTIONS,
    ConfigError,
    DominanceError,
)

__version__ = "0.1.0"

__all__ = [
    "GegenbauerParam", "ln_gamma", "g_coeff", "g_coeff_sequence", "d_coeff",
    "d_coeff_sequence", "upper_incomplete_gamma_int", "h_norm", "total_mass",
    "eval_recurrence", "recurrence_table", "eval_derivative", "eval_w_series",
    "normalized_on_ellipse", "value_at_one", "max_abs_bound",
    "GAUSS", "GAUSS_LOBATTO", "NodeSet", "gauss_nodes", "gauss_lobatto_nodes",
    "quad_weights_interpolatory", "barycentric_weights",
    "DiffMatrix", "interpolate", "diff_matrix", "differentiate_at_nodes",
    "expansion_coeffs", "truncated_expansion_error",
    "EllipseSpec", "BoundBreakdown", "PoleOnContourError", "ellipse_points",
    "ellipse_axes", "interval_distance", "perimeter_estimate", "sup_on_ellipse",
    "remainder_exact", "remainder_bound", "e_n_metric", "interp_bound_gauss",
    "diff_bound_gauss", "interp_bound_lobatto", "diff_bound_lobatto",
    "quad_bound", "best_bound_over_rho",
    "ExperimentConfig", "ExperimentRecord", "TEST_FUNCTIONS",
    "ConfigError", "DominanceError",
    "__version__",
]
