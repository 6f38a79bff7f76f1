from .certificates import certify_growth, certify_iterlog, certify_log, growth_profile
from .inequalities import (
    verify_cutoff,
    verify_gn_bound,
    verify_h1h2,
    verify_herglotz_growth,
    verify_iterlog_monotonicity,
    verify_log_power_bound,
    verify_norm_ineq,
    verify_step_bound,
)
from .models import Certificate, Check, InequalityReport, InequalityRow, PreconditionFlags, Quantity, Verdict

__all__ = [
    "Certificate",
    "Check",
    "InequalityReport",
    "InequalityRow",
    "PreconditionFlags",
    "Quantity",
    "Verdict",
    "certify_growth",
    "certify_iterlog",
    "certify_log",
    "growth_profile",
    "verify_cutoff",
    "verify_gn_bound",
    "verify_h1h2",
    "verify_herglotz_growth",
    "verify_iterlog_monotonicity",
    "verify_log_power_bound",
    "verify_norm_ineq",
    "verify_step_bound",
]
