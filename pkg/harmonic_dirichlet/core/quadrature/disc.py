from __future__ import annotations

import logging
import math
from typing import Iterable

import numpy as np

from harmonic_dirichlet.core.exceptions import NonFiniteSampleError
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.points import DiscIntegrand, DiscPoints
from harmonic_dirichlet.core.quadrature.result import RATIO_CONVERGENCE, QuadratureResult, TailProfile
from harmonic_dirichlet.core.quadrature.rules import gauss_legendre, geometric_annuli, graded_edges, panel_rule

log = logging.getLogger(__name__)


def _annulus_integral(
    integrand: DiscIntegrand,
    d_outer: float,
    d_inner: float,
    edges: np.ndarray,
    radial_order: int,
    angular_order: int,
) -> float:
    """
    Tensor Gauss rule over {1 - d_outer <= |z| <= 1 - d_inner}, with area element r dr dtheta.

    Raises:
        NonFiniteSampleError: If the integrand is not finite at one of the nodes.
    """
    x, w = gauss_legendre(radial_order)
    half = 0.5 * (d_outer - d_inner)
    d = 0.5 * (d_outer + d_inner) + half * x
    radial_weights = half * w * (1.0 - d)
    theta, angular_weights = panel_rule(edges, angular_order)

    points = DiscPoints(d[:, None], theta[None, :])
    values = np.broadcast_to(np.asarray(integrand(points), dtype=float), (d.size, theta.size))
    finite = np.isfinite(values)
    if not finite.all():
        i, j = np.argwhere(~finite)[0]
        raise NonFiniteSampleError(location=complex((1.0 - d[i]) * np.exp(1j * theta[j])))

    return float(radial_weights @ values @ angular_weights)


def _geometric_tail(levels: list[float], limit: float) -> tuple[float, bool]:
    """
    Estimates the sum of the levels beyond the last one from the ratio of the last two.

    Ratios above `limit`, and tails larger than the integrated part, are not read as decay.
    """
    if len(levels) < 2:
        return 0.0, True

    last, previous = levels[-1], levels[-2]
    if last == 0.0:
        return 0.0, True
    if previous == 0.0:
        return 0.0, False

    ratio = last / previous
    if not 0.0 <= ratio <= limit:
        return 0.0, False

    tail = last * ratio / (1.0 - ratio)
    if abs(tail) > abs(math.fsum(levels)):
        return 0.0, False
    return tail, True


def disc_integral(
    integrand: DiscIntegrand,
    spec: QuadratureSpec,
    singular_angles: Iterable[float] = (),
) -> QuadratureResult:
    """
    Integrates a real integrand over the unit disc against area measure dA.

    The disc is cut into geometric annuli 1 - q^k <= |z| <= 1 - q^(k+1). Each annulus gets a tensor Gauss rule,
    with angular panels graded towards the declared boundary singularities down to the annulus' own distance to
    the boundary. A rule of half the order on the same panels gives the error estimate. The part of the disc
    beyond the last annulus is estimated from the decay of the last two levels.

    Args:
        integrand       : Integrand evaluated on batches of polar points.
        spec            : Quadrature specification.
        singular_angles : Boundary angles near which the integrand concentrates.

    Returns:
        The integral (not normalised by pi) and its error estimate. The error is infinite when the annulus
        contributions do not decay.

    Raises:
        NonFiniteSampleError: If the integrand is not finite at a node.
    """
    angles = tuple(singular_angles)
    levels = spec.effective_radial_levels
    bounds = geometric_annuli(spec.refinement_factor, levels)
    coarse_radial = max(2, spec.radial_order // 2)
    coarse_angular = max(2, spec.angular_order // 2)

    fine: list[float] = []
    differences: list[float] = []
    for k in range(levels):
        edges = graded_edges(spec.angular_panels, angles, float(bounds[k + 1]))
        value = _annulus_integral(integrand, bounds[k], bounds[k + 1], edges, spec.radial_order, spec.angular_order)
        coarse = _annulus_integral(integrand, bounds[k], bounds[k + 1], edges, coarse_radial, coarse_angular)
        fine.append(value)
        differences.append(abs(value - coarse))

    ratio_limit = max(RATIO_CONVERGENCE, math.sqrt(spec.refinement_factor))
    tail, decaying = _geometric_tail(fine, ratio_limit)
    value = math.fsum(fine) + tail
    error = math.fsum(differences) + abs(tail) if decaying else math.inf
    log.debug("Disc integral over %d levels: %.16g (error %.3g, tail %.3g)", levels, value, error, tail)
    return QuadratureResult(value=value, error=error, levels=levels, tail=tail)


def tail_profile(
    integrand: DiscIntegrand,
    spec: QuadratureSpec,
    singular_angles: Iterable[float] = (),
) -> TailProfile:
    """
    Integrates a nonnegative integrand over the dyadic annuli 1 - 2^-k <= |z| < 1 - 2^-(k+1) and classifies
    the resulting sequence as convergent, divergent or inconclusive.

    Args:
        integrand       : Nonnegative integrand evaluated on batches of polar points.
        spec            : Quadrature specification; `tail_annuli` and `tail_window` set the profile length.
        singular_angles : Boundary angles near which the integrand concentrates.
    """
    angles = tuple(singular_angles)
    bounds = geometric_annuli(0.5, spec.tail_annuli)
    annuli = []
    for k in range(spec.tail_annuli):
        edges = graded_edges(spec.angular_panels, angles, float(bounds[k + 1]))
        value = _annulus_integral(integrand, bounds[k], bounds[k + 1], edges, spec.radial_order, spec.angular_order)
        annuli.append(max(0.0, value))

    profile = TailProfile(tuple(annuli), window=spec.tail_window, abs_tol=spec.abs_tol)
    log.debug("Tail profile classified %s (last annuli %s)", profile.classification, annuli[-3:])
    return profile
