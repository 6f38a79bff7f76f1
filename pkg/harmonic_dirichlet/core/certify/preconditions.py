from __future__ import annotations

import logging

import numpy as np

from harmonic_dirichlet.core.certify.models import Check, PreconditionFlags
from harmonic_dirichlet.core.functions.boundary import Function, is_outer, sup_norm_estimate
from harmonic_dirichlet.core.functions.expression import as_function
from harmonic_dirichlet.core.functions.outer import OuterFn
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.points import DiscPoints
from harmonic_dirichlet.core.quadrature.rules import TWO_PI

log = logging.getLogger(__name__)

OUTER_TOLERANCE = 1e-6
"""Largest accepted gap between log|g(0)| and the boundary mean of log|g|."""

SUP_TOLERANCE = 1e-6
"""Slack on ||g||_inf <= 1."""

POLAR_GRID = 64
"""Radii and angles of the polar grid the non-vanishing test samples."""


def polar_grid(size: int, gap: float) -> DiscPoints:
    """
    size x size polar points: 1 - |z| log-spaced from 1 down to `gap` along the rows, uniform angles along the
    columns.
    """
    d = np.geomspace(1.0, gap, size)
    angles = TWO_PI * np.arange(size) / size
    return DiscPoints(d[:, None], angles[None, :])


def check_outer(g: Function, spec: QuadratureSpec) -> Check:
    result = is_outer(g, OUTER_TOLERANCE, spec)
    if result.is_outer:
        return Check(passed=True, detail=f"outer, gap {result.gap:.3g}")
    return Check(passed=False, detail=result.reason or "not outer")


def check_sup_norm(g: Function, spec: QuadratureSpec) -> Check:
    estimate = sup_norm_estimate(g, spec)
    sample = complex(estimate.radius * np.exp(1j * estimate.angle))
    if estimate.value <= 1.0 + SUP_TOLERANCE:
        return Check(passed=True, detail=f"sup |g| = {estimate.value:.9g} at radius {estimate.radius}", sample=sample)
    return Check(passed=False, detail=f"sup |g| = {estimate.value:.9g} exceeds 1", sample=sample)


def check_nonvanishing(g: Function, spec: QuadratureSpec) -> Check:
    """Structural certification first, then min |g| on the polar grid."""
    if isinstance(g, OuterFn):
        return Check(passed=True, detail="outer functions are zero-free")
    node = as_function(g)
    if node.nonvanishing:
        return Check(passed=True, detail="structurally zero-free")

    points = polar_grid(POLAR_GRID, spec.sup_radius_gap).z.ravel()
    with np.errstate(all="ignore"):
        moduli = np.abs(node._evaluate(points))
    moduli = np.where(np.isfinite(moduli), moduli, 0.0)
    worst = int(np.argmin(moduli))
    sample = complex(points[worst])
    if moduli[worst] > 0.0:
        return Check(passed=True, detail=f"min |g| = {moduli[worst]:.3g} on the polar grid", sample=sample)
    return Check(passed=False, detail="g vanishes on the polar grid", sample=sample)


def check_preconditions(
    g: Function,
    spec: QuadratureSpec,
    outer: bool = True,
    sup_norm: bool = True,
    nonvanishing: bool = True,
) -> PreconditionFlags:
    """
    Runs the requested precondition checks.

    Args:
        g               : Function under test.
        spec            : Quadrature specification.
        outer           : Check outerness.
        sup_norm        : Check ||g||_inf <= 1.
        nonvanishing    : Check that g is zero-free.
    """
    flags = PreconditionFlags(
        outer=check_outer(g, spec) if outer else None,
        sup_norm=check_sup_norm(g, spec) if sup_norm else None,
        nonvanishing=check_nonvanishing(g, spec) if nonvanishing else None,
    )
    for name, check in flags.items():
        log.debug("Precondition %s: %s (%s)", name, "passed" if check.passed else "failed", check.detail)
    return flags
