from .boundary import (
    Function,
    OuterCheck,
    SupNormEstimate,
    boundary_values,
    is_outer,
    outer_min,
    radial_limit,
    sup_norm_estimate,
)
from .codec import decode_function, encode_function
from .expression import AnalyticFn, analytic_log, as_function, constant, deriv, evaluate, identity
from .outer import OuterFn, outer_from_log_modulus

__all__ = [
    "AnalyticFn",
    "Function",
    "OuterCheck",
    "OuterFn",
    "SupNormEstimate",
    "analytic_log",
    "as_function",
    "boundary_values",
    "constant",
    "decode_function",
    "deriv",
    "encode_function",
    "evaluate",
    "identity",
    "is_outer",
    "outer_from_log_modulus",
    "outer_min",
    "radial_limit",
    "sup_norm_estimate",
]
