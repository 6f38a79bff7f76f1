from __future__ import annotations

import logging
import math
from typing import Iterable

import numpy as np

from harmonic_dirichlet.core.exceptions import NonFiniteSampleError
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.points import CircleIntegrand
from harmonic_dirichlet.core.quadrature.result import CircleResult
from harmonic_dirichlet.core.quadrature.rules import TWO_PI, gauss_legendre, normalize_angles

log = logging.getLogger(__name__)

LOG_TWO = math.log(2.0)


def _evaluate(integrand: CircleIntegrand, angles: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(integrand(angles), dtype=float), angles.shape)
    finite = np.isfinite(values)
    if not finite.all():
        raise NonFiniteSampleError(location=float(angles[np.argmin(finite)]))
    return values


def _circle_distance(x: np.ndarray, angle: float) -> np.ndarray:
    return np.abs(np.mod(x - angle + math.pi, TWO_PI) - math.pi)


def _base_edges(panels: int, angles: tuple[float, ...], half_width: float) -> tuple[np.ndarray, np.ndarray]:
    """Panel edges of the uniform rule with the exclusion windows cut out; returns (left, right) edge arrays."""
    edges = [np.linspace(0.0, TWO_PI, panels + 1)]
    for angle in angles:
        edges.append(np.mod(np.array([angle - half_width, angle + half_width]), TWO_PI))
    merged = np.unique(np.concatenate(edges))
    left, right = merged[:-1], merged[1:]
    mid = 0.5 * (left + right)
    outside = np.ones(mid.shape, dtype=bool)
    for angle in angles:
        outside &= _circle_distance(mid, angle) > half_width
    return left[outside], right[outside]


def _composite(integrand: CircleIntegrand, left: np.ndarray, right: np.ndarray, order: int) -> tuple[float, float]:
    """Integral and absolute integral over the given panels."""
    if left.size == 0:
        return 0.0, 0.0

    x, w = gauss_legendre(order)
    half = 0.5 * (right - left)
    nodes = (0.5 * (right + left))[:, None] + half[:, None] * x[None, :]
    weights = (half[:, None] * w[None, :]).ravel()
    values = _evaluate(integrand, nodes.ravel())
    return float(values @ weights), float(np.abs(values) @ weights)


def circle_integral(
    integrand: CircleIntegrand,
    singular_angles: Iterable[float],
    spec: QuadratureSpec,
) -> CircleResult:
    """
    Integrates a real function of the angle over [0, 2pi).

    Away from the declared singular angles a composite Gauss rule is used. Symmetric exclusion windows around
    each singular angle start at the width of a base panel and are halved repeatedly, the freed annular panels
    being integrated as they are uncovered. The still-excluded part is estimated by fitting a + b log|t - s| on
    each side of the window, which is exact for logarithmic singularities and harmless for smooth integrands. The
    process stops once an additional halving changes the estimate by less than the tolerance, or flags the
    result as not converged once the window floor `singular_exclusion` is reached.

    Args:
        integrand       : Function of the angle; must be 2pi-periodic.
        singular_angles : Angles where the integrand may be singular or not smooth.
        spec            : Quadrature specification.

    Returns:
        The integral over [0, 2pi) (callers divide by 2pi for means), error estimate and convergence flag.

    Raises:
        NonFiniteSampleError: If the integrand is not finite at a node.
    """
    angles = normalize_angles(singular_angles)
    panels = spec.angular_panels
    order = spec.angular_order
    width = TWO_PI / panels

    if not angles:
        edges = np.linspace(0.0, TWO_PI, panels + 1)
        value, _ = _composite(integrand, edges[:-1], edges[1:], order)
        coarse, _ = _composite(integrand, edges[:-1], edges[1:], max(2, order // 2))
        return CircleResult(value=value, error=abs(value - coarse), converged=True, window=0.0)

    half_width = width
    if len(angles) > 1:
        gaps = np.diff(np.array((*angles, angles[0] + TWO_PI)))
        half_width = min(half_width, 0.45 * float(gaps.min()))

    left, right = _base_edges(panels, angles, half_width)
    integral, magnitude = _composite(integrand, left, right, order)
    anchors = np.array(angles)

    def window_estimate(w: float) -> tuple[float, float]:
        offsets = np.array([0.5 * w, 0.25 * w, -0.5 * w, -0.25 * w])
        values = _evaluate(integrand, (anchors[None, :] + offsets[:, None]).ravel()).reshape(4, -1)
        midpoint = w * float(values[0].sum() + values[2].sum())
        estimate = 0.0
        for outer, inner in ((values[0], values[1]), (values[2], values[3])):
            # F ~ level + slope * log|t - s| on each side of the window
            slope = (outer - inner) / LOG_TWO
            level = outer - slope * math.log(0.5 * w)
            estimate += w * float(np.sum(level + slope * (math.log(w) - 1.0)))
        return estimate, abs(estimate - midpoint)

    estimate, spread = window_estimate(half_width)
    previous = integral + estimate
    delta = math.inf
    converged = False
    while 0.5 * half_width >= spec.singular_exclusion:
        inner = 0.5 * half_width
        ring_left = np.concatenate((anchors + inner, anchors - half_width))
        ring_right = np.concatenate((anchors + half_width, anchors - inner))
        increment, increment_magnitude = _composite(integrand, ring_left, ring_right, order)
        integral += increment
        magnitude += increment_magnitude
        half_width = inner

        estimate, spread = window_estimate(half_width)
        total = integral + estimate
        delta = abs(total - previous)
        previous = total
        if delta <= max(spec.abs_tol, spec.rel_tol * (magnitude + abs(estimate))):
            converged = True
            break

    if not converged:
        log.debug("Circle integral hit the window floor %.3g with change %.3g", spec.singular_exclusion, delta)

    value = integral + estimate
    error = delta + spread
    return CircleResult(value=value, error=error, converged=converged, window=half_width)
