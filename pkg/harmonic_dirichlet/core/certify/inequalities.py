"""
Numerical verification of the inequalities behind the cyclicity criteria.

Every check returns an `InequalityReport`. A failed hypothesis of the statement gives SKIP, never FAIL, and a
FAIL always names the sample where the inequality broke.
"""

from __future__ import annotations

import logging
import math
from typing import Mapping

import numpy as np

from harmonic_dirichlet.core.certify.certificates import seminorm_integrand
from harmonic_dirichlet.core.certify.models import DEFAULT_REL_SLACK, InequalityReport, InequalityRow
from harmonic_dirichlet.core.certify.preconditions import check_preconditions, polar_grid
from harmonic_dirichlet.core.dirichlet import NormResult, dmu_norm_sq, local_dirichlet_value
from harmonic_dirichlet.core.exceptions import DivergenceError, DomainError, NonFiniteSampleError, NotOuterError
from harmonic_dirichlet.core.functions.boundary import Function, function_angles, is_outer, outer_min, sup_norm_estimate
from harmonic_dirichlet.core.functions.expression import AnalyticFn, as_function
from harmonic_dirichlet.core.iterlog import BOUND_SLACK, HALF_PI, compute_M, iterate_log, iterate_log_derivative
from harmonic_dirichlet.core.measure import CircleMeasure
from harmonic_dirichlet.core.quadrature.disc import tail_profile
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.rules import normalize_angles

log = logging.getLogger(__name__)

CLAIM_H1H2 = "D_z(g h1) <= 4c D_z(g h2) + (2 + 4c) ||h2||_inf^2 D_z(g)"
CLAIM_CUTOFF = "D_z(h ^ n h^2) <= 4 D_z(h)"
CLAIM_NORM = "||g (h ^ n h^2)||_mu^2 <= 16 ||g h||_mu^2 + 18 ||h||_inf^2 ||g||_mu^2"
CLAIM_GN_BOUND = "|G_n(f(z))| <= pi/2 + M_n F_n(|z|^2) with M_0 = 4 f(0)"
CLAIM_HERGLOTZ = "|f(z)| <= 4 f(0)/(1 - |z|^2)"
CLAIM_STEP = "|G_(n+1)(w)| <= log(1 + |G_n(w)|) + pi/2 and |G_n'(w)| <= 1 on Re w >= 0"
CLAIM_LOG_POWER = "|G_1(w)| <= log|1 + w| + pi/2 <= |1 + w|^alpha/alpha + pi/2 on Re w >= 0"
CLAIM_MONOTONE = "a_j(k) <= a_j(n) + (pi/2)^2 b_j on every dyadic annulus"

SUP_SLACK = 1e-6
"""Relative slack when comparing sampled sup norms."""

HERGLOTZ_GRID = 100
HERGLOTZ_GAP = 1e-6
"""The Herglotz checks sample a 100 x 100 polar grid reaching |z| = 1 - 1e-6."""

DEFAULT_HALF_PLANE_SAMPLES = 10000
DEFAULT_STEP_ORDERS = 6
HALF_PLANE_RANGE = (1e-6, 1e6)
"""Moduli of the half-plane sample points."""

MONOTONE_CONSTANT = HALF_PI**2


def _unsettled(results: Mapping[str, NormResult]) -> str | None:
    """Why a set of norms cannot be compared, or None."""
    for name, result in results.items():
        if result.infinite:
            return f"{name} is infinite"
        if not result.converged:
            return f"{name} did not converge"
    return None


def _sup(f: Function, spec: QuadratureSpec) -> float:
    return sup_norm_estimate(f, spec).value


def _zeta_label(zeta: complex) -> str:
    zeta = complex(zeta)
    return f"zeta = {zeta.real:.6g}{zeta.imag:+.6g}i"


def verify_h1h2(
    g: Function,
    h1: Function,
    h2: Function,
    zeta: complex,
    c: float,
    spec: QuadratureSpec | None = None,
) -> InequalityReport:
    """
    Verifies D_zeta(g h1) <= 4c D_zeta(g h2) + (2 + 4c) ||h2||^2 D_zeta(g).

    The hypotheses ||h1||_inf <= ||h2||_inf and D_zeta(h1) <= c D_zeta(h2) are checked first; a failing one gives
    a SKIP report.

    Raises:
        DomainError: If c is not positive or |zeta| != 1.
    """
    if not (math.isfinite(c) and c > 0):
        raise DomainError(value=c, constraint="c > 0")
    spec = spec or QuadratureSpec()
    samples = _zeta_label(zeta)

    sup1, sup2 = _sup(h1, spec), _sup(h2, spec)
    quantities: dict[str, float] = {"c": c, "sup_h1": sup1, "sup_h2": sup2}
    if sup1 > sup2 * (1.0 + SUP_SLACK):
        detail = f"||h1|| = {sup1:.9g} exceeds ||h2|| = {sup2:.9g}"
        return InequalityReport.skipped(CLAIM_H1H2, samples, detail, quantities)

    d_h1 = local_dirichlet_value(h1, zeta, spec)
    d_h2 = local_dirichlet_value(h2, zeta, spec)
    quantities.update(D_h1=d_h1.value, D_h2=d_h2.value)
    reason = _unsettled({"D_z(h1)": d_h1, "D_z(h2)": d_h2})
    if reason:
        return InequalityReport.skipped(CLAIM_H1H2, samples, reason, quantities)
    hypothesis = InequalityRow("hypothesis", d_h1.value, c * d_h2.value, d_h1.error, c * d_h2.error)
    if hypothesis.violation > hypothesis.tolerance(DEFAULT_REL_SLACK):
        return InequalityReport.skipped(CLAIM_H1H2, samples, "D_z(h1) exceeds c D_z(h2)", quantities)

    node = as_function(g)
    d_gh1 = local_dirichlet_value(node * as_function(h1), zeta, spec)
    d_gh2 = local_dirichlet_value(node * as_function(h2), zeta, spec)
    d_g = local_dirichlet_value(node, zeta, spec)
    quantities.update(D_gh1=d_gh1.value, D_gh2=d_gh2.value, D_g=d_g.value)
    reason = _unsettled({"D_z(g h1)": d_gh1, "D_z(g h2)": d_gh2, "D_z(g)": d_g})
    if reason:
        return InequalityReport.skipped(CLAIM_H1H2, samples, reason, quantities)

    factor = (2.0 + 4.0 * c) * sup2**2
    row = InequalityRow(
        samples,
        d_gh1.value,
        4.0 * c * d_gh2.value + factor * d_g.value,
        d_gh1.error,
        4.0 * c * d_gh2.error + factor * d_g.error,
    )
    return InequalityReport.from_rows(CLAIM_H1H2, samples, [row], quantities=quantities)


def cutoff(h: Function, n: float, spec: QuadratureSpec) -> Function:
    """The outer minimum h ^ n h^2."""
    node = as_function(h)
    return outer_min(h, n * node * node, spec)


def verify_cutoff(h: Function, zeta: complex, n: int, spec: QuadratureSpec | None = None) -> InequalityReport:
    """
    Verifies D_zeta(h ^ n h^2) <= 4 D_zeta(h) for an outer, bounded h.

    Raises:
        NotOuterError   : If h fails the outerness test.
        DomainError     : If n < 1, h is unbounded or |zeta| != 1.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(value=n, constraint="n is a positive integer")
    spec = spec or QuadratureSpec()
    check = is_outer(h, spec=spec)
    if not check.is_outer:
        raise NotOuterError(reason=check.reason)
    sup = _sup(h, spec)
    if not math.isfinite(sup):
        raise DomainError(value=sup, constraint="h is bounded")

    samples = f"{_zeta_label(zeta)}, n = {n}"
    lhs = local_dirichlet_value(cutoff(h, n, spec), zeta, spec)
    rhs = local_dirichlet_value(h, zeta, spec)
    quantities = {"n": float(n), "D_cutoff": lhs.value, "D_h": rhs.value, "sup_h": sup}
    reason = _unsettled({"D_z(h ^ n h^2)": lhs, "D_z(h)": rhs})
    if reason:
        return InequalityReport.skipped(CLAIM_CUTOFF, samples, reason, quantities)

    row = InequalityRow(samples, lhs.value, 4.0 * rhs.value, lhs.error, 4.0 * rhs.error)
    return InequalityReport.from_rows(CLAIM_CUTOFF, samples, [row], quantities=quantities)


def verify_norm_ineq(
    g: Function,
    h: Function,
    mu: CircleMeasure,
    n: int,
    spec: QuadratureSpec | None = None,
) -> InequalityReport:
    """
    Verifies ||g (h ^ n h^2)||^2 <= 16 ||g h||^2 + 18 ||h||_inf^2 ||g||^2 in D(mu).

    g and g h must have finite, converged D(mu) norms and h must be outer and bounded; otherwise the report is a
    SKIP.

    Raises:
        DomainError: If n < 1.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(value=n, constraint="n is a positive integer")
    spec = spec or QuadratureSpec()
    samples = f"n = {n}"

    check = is_outer(h, spec=spec)
    if not check.is_outer:
        return InequalityReport.skipped(CLAIM_NORM, samples, f"h is not outer: {check.reason}")
    sup = _sup(h, spec)
    if not math.isfinite(sup):
        return InequalityReport.skipped(CLAIM_NORM, samples, "h is unbounded")

    node = as_function(g)
    quantities: dict[str, float] = {"n": float(n), "sup_h": sup}
    try:
        g_norm = dmu_norm_sq(node, mu, spec)
        gh_norm = dmu_norm_sq(node * as_function(h), mu, spec)
        quantities.update(norm_g=g_norm.value, norm_gh=gh_norm.value)
        reason = _unsettled({"||g||": g_norm, "||g h||": gh_norm})
        if reason:
            return InequalityReport.skipped(CLAIM_NORM, samples, reason, quantities)
        lhs = dmu_norm_sq(node * as_function(cutoff(h, n, spec)), mu, spec)
    except (DivergenceError, NonFiniteSampleError) as exc:
        return InequalityReport.skipped(CLAIM_NORM, samples, str(exc), quantities)

    quantities["norm_cutoff"] = lhs.value
    reason = _unsettled({"||g (h ^ n h^2)||": lhs})
    if reason:
        return InequalityReport.skipped(CLAIM_NORM, samples, reason, quantities)

    factor = 18.0 * sup**2
    row = InequalityRow(
        samples,
        lhs.value,
        16.0 * gh_norm.value + factor * g_norm.value,
        lhs.error,
        16.0 * gh_norm.error + factor * g_norm.error,
    )
    return InequalityReport.from_rows(CLAIM_NORM, samples, [row], quantities=quantities)


def _herglotz_samples(f: Function) -> tuple[AnalyticFn, float, np.ndarray, np.ndarray, np.ndarray]:
    """
    Samples f on the Herglotz grid after checking f(0) > 0 and Re f > 0.

    Returns:
        The tree, f(0), the points, 1 - |z|^2 and f at the points, all flattened.

    Raises:
        DomainError: With the failing sample when f is not Herglotz on the grid.
    """
    node = as_function(f)
    with np.errstate(all="ignore"):
        at_zero = complex(node._evaluate(np.zeros(1, dtype=complex))[0])
    if not (math.isfinite(at_zero.real) and at_zero.real > 0.0 and abs(at_zero.imag) <= 1e-12 * at_zero.real):
        raise DomainError(value=at_zero, constraint="f(0) > 0")

    points = polar_grid(HERGLOTZ_GRID, HERGLOTZ_GAP)
    z = np.broadcast_to(points.z, (HERGLOTZ_GRID, HERGLOTZ_GRID)).ravel()
    one_minus = np.broadcast_to(points.one_minus_modulus_sq, (HERGLOTZ_GRID, HERGLOTZ_GRID)).ravel()
    with np.errstate(all="ignore"):
        values = node._evaluate(z)
    bad = ~np.isfinite(values) | (values.real <= 0.0)
    if np.any(bad):
        raise DomainError(value=complex(z[np.argmax(bad)]), constraint="Re f(z) > 0")
    return node, at_zero.real, z, one_minus, values


def _worst_row(label: str, z: np.ndarray, lhs: np.ndarray, rhs: np.ndarray) -> InequalityRow:
    worst = int(np.argmax(lhs - rhs))
    point = complex(z[worst])
    return InequalityRow(f"{label} at z = {point.real:.6g}{point.imag:+.6g}i", float(lhs[worst]), float(rhs[worst]))


def verify_gn_bound(f: Function, n_max: int, spec: QuadratureSpec | None = None) -> InequalityReport:
    """
    Verifies |G_n(f(z))| <= pi/2 + M_n F_n(|z|^2) for n = 0..n_max on a polar grid reaching |z| = 1 - 1e-6, with
    the constants M_n seeded by M_0 = 4 f(0).

    Raises:
        DomainError: If f(0) is not positive or Re f <= 0 at a grid point.
    """
    if isinstance(n_max, bool) or not isinstance(n_max, int) or n_max < 0:
        raise DomainError(value=n_max, constraint="n_max is a nonnegative integer")
    spec = spec or QuadratureSpec()
    _, at_zero, z, one_minus, values = _herglotz_samples(f)
    table = compute_M(n_max, 4.0 * at_zero, spec.sup_search_limit)

    rows = []
    for n in range(n_max + 1):
        lhs = np.abs(iterate_log(n, values))
        rhs = HALF_PI + table.M[n] * iterate_log(n, 1.0 / one_minus).real
        rows.append(_worst_row(f"n = {n}", z, lhs, rhs))

    quantities = {"f0": at_zero, **{f"M_{n}": m for n, m in enumerate(table.M)}}
    samples = f"{HERGLOTZ_GRID}x{HERGLOTZ_GRID} polar grid up to |z| = 1 - {HERGLOTZ_GAP:g}, n <= {n_max}"
    return InequalityReport.from_rows(CLAIM_GN_BOUND, samples, rows, quantities=quantities)


def verify_herglotz_growth(f: Function, spec: QuadratureSpec | None = None) -> InequalityReport:
    """
    Verifies |f(z)| <= 4 f(0)/(1 - |z|^2) radius by radius on the Herglotz grid.

    Raises:
        DomainError: If f(0) is not positive or Re f <= 0 at a grid point.
    """
    _, at_zero, z, one_minus, values = _herglotz_samples(f)
    lhs = np.abs(values).reshape(HERGLOTZ_GRID, HERGLOTZ_GRID)
    rhs = (4.0 * at_zero / one_minus).reshape(HERGLOTZ_GRID, HERGLOTZ_GRID)
    grid = z.reshape(HERGLOTZ_GRID, HERGLOTZ_GRID)
    rows = [_worst_row(f"|z| = {abs(grid[i, 0]):.9g}", grid[i], lhs[i], rhs[i]) for i in range(HERGLOTZ_GRID)]
    samples = f"{HERGLOTZ_GRID}x{HERGLOTZ_GRID} polar grid up to |z| = 1 - {HERGLOTZ_GAP:g}"
    return InequalityReport.from_rows(CLAIM_HERGLOTZ, samples, rows, quantities={"f0": at_zero})


def half_plane_samples(samples: int = DEFAULT_HALF_PLANE_SAMPLES) -> np.ndarray:
    """
    About `samples` points of the closed right half-plane: log-spaced moduli times uniform angles in
    [-pi/2, pi/2].
    """
    side = max(2, math.isqrt(samples))
    moduli = np.geomspace(*HALF_PLANE_RANGE, side)
    angles = np.linspace(-HALF_PI, HALF_PI, side)
    return (moduli[:, None] * np.exp(1j * angles[None, :])).ravel()


def verify_step_bound(
    samples: int = DEFAULT_HALF_PLANE_SAMPLES,
    n_max: int = DEFAULT_STEP_ORDERS,
) -> InequalityReport:
    """
    Verifies the one-step growth bound of the iterated logarithm and the contraction |G_n'| <= 1 on half-plane
    samples, with slack 1e-12.
    """
    if isinstance(n_max, bool) or not isinstance(n_max, int) or n_max < 0:
        raise DomainError(value=n_max, constraint="n_max is a nonnegative integer")
    w = half_plane_samples(samples)
    rows = []
    for n in range(n_max + 1):
        derivative = np.abs(iterate_log_derivative(n, w))
        rows.append(_worst_row(f"|G_{n}'|", w, derivative, np.ones_like(derivative)))
        if n < n_max:
            lhs = np.abs(iterate_log(n + 1, w))
            rhs = np.log1p(np.abs(iterate_log(n, w))) + HALF_PI
            rows.append(_worst_row(f"step {n} -> {n + 1}", w, lhs, rhs))
    description = f"{w.size} points of Re w >= 0 with |w| in [{HALF_PLANE_RANGE[0]:g}, {HALF_PLANE_RANGE[1]:g}]"
    return InequalityReport.from_rows(CLAIM_STEP, description, rows, rel_slack=BOUND_SLACK)


def verify_log_power_bound(alpha: float, samples: int = DEFAULT_HALF_PLANE_SAMPLES) -> InequalityReport:
    """
    Verifies |G_1(w)| <= log|1 + w| + pi/2 <= |1 + w|^alpha/alpha + pi/2, the estimate that puts G_1(log 1/g) in
    H^p.

    Raises:
        DomainError: If alpha <= 0.
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(value=alpha, constraint="alpha > 0")
    w = half_plane_samples(samples)
    modulus = np.abs(1.0 + w)
    middle = np.log(modulus) + HALF_PI
    rows = [
        _worst_row("log bound", w, np.abs(np.log1p(w)), middle),
        _worst_row("power bound", w, middle, modulus**alpha / alpha + HALF_PI),
    ]
    description = f"{w.size} points of Re w >= 0, alpha = {alpha:g}"
    return InequalityReport.from_rows(CLAIM_LOG_POWER, description, rows, rel_slack=BOUND_SLACK)


def verify_iterlog_monotonicity(
    g: Function,
    mu: CircleMeasure,
    n: int,
    k: int,
    spec: QuadratureSpec | None = None,
) -> InequalityReport:
    """
    Compares the dyadic annulus integrals a_j(m) of |G_m'(log 1/g)|^2 |g'/g|^2 P_mu for m = k and m = n < k
    against the bound a_j(k) <= a_j(n) + (pi/2)^2 b_j, with b_j the annulus integrals of |g'/g|^2 P_mu.

    Raises:
        DomainError: Unless 0 <= n < k.
    """
    for value in (n, k):
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise DomainError(value=value, constraint="orders are nonnegative integers")
    if k <= n:
        raise DomainError(value=k, constraint=f"k > n = {n}")
    spec = spec or QuadratureSpec()
    samples = f"{spec.tail_annuli} dyadic annuli, n = {n}, k = {k}"

    flags = check_preconditions(g, spec, outer=False, sup_norm=True, nonvanishing=True)
    if not flags.passed:
        return InequalityReport.skipped(CLAIM_MONOTONE, samples, "; ".join(flags.failures))

    angles = normalize_angles((*function_angles(g), *mu.singular_angles))
    try:
        upper = tail_profile(seminorm_integrand(g, mu, k), spec, angles).annuli
        lower = tail_profile(seminorm_integrand(g, mu, n), spec, angles).annuli
        base = tail_profile(seminorm_integrand(g, mu, 0), spec, angles).annuli
    except NonFiniteSampleError as exc:
        return InequalityReport.skipped(CLAIM_MONOTONE, samples, str(exc))

    rows = [
        InequalityRow(f"annulus {j}", a_k, a_n + MONOTONE_CONSTANT * b)
        for j, (a_k, a_n, b) in enumerate(zip(upper, lower, base))
    ]
    return InequalityReport.from_rows(CLAIM_MONOTONE, samples, rows)
