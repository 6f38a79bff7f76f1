from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any, Union

import numpy as np
from typing_extensions import TypeAlias

from harmonic_dirichlet.core.exceptions import DomainError, NonFiniteSampleError, NotOuterError
from harmonic_dirichlet.core.functions.expression import AnalyticFn, as_function
from harmonic_dirichlet.core.functions.outer import OuterFn
from harmonic_dirichlet.core.quadrature.circle import circle_integral
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.rules import TWO_PI, normalize_angles

log = logging.getLogger(__name__)

Function: TypeAlias = Union[AnalyticFn, OuterFn]

DEFAULT_OUTER_TOLERANCE = 1e-6
UNIMODULAR_TOLERANCE = 1e-9


def function_angles(f: Function) -> tuple[float, ...]:
    """Declared boundary singularities of a tree or an outer function."""
    return as_function(f).singular_angles()


def _extrapolate(node: AnalyticFn, unit: np.ndarray, epsilon: float) -> np.ndarray:
    with np.errstate(all="ignore"):
        near = node._evaluate((1.0 - 0.5 * epsilon) * unit)
        far = node._evaluate((1.0 - epsilon) * unit)
    return 2.0 * near - far


def boundary_values(f: Function, t: Any, spec: QuadratureSpec | None = None) -> np.ndarray:
    """
    Radial boundary values f(e^(it)).

    Outer functions are evaluated on the circle directly. Trees are evaluated at 1 - eps and 1 - eps/2 and
    extrapolated linearly to r = 1.

    Args:
        f       : Function to sample.
        t       : Angles.
        spec    : Supplies `boundary_epsilon`.
    """
    spec = spec or QuadratureSpec()
    unit = np.exp(1j * np.asarray(t, dtype=float))
    if isinstance(f, OuterFn):
        return f.values(unit)
    return _extrapolate(as_function(f), unit, spec.boundary_epsilon)


def boundary_log_modulus(f: Function, t: Any, spec: QuadratureSpec | None = None) -> np.ndarray:
    """log|f(e^(it))|, -inf at boundary zeros."""
    if isinstance(f, OuterFn):
        return f.boundary_log_modulus(np.asarray(t, dtype=float))
    with np.errstate(divide="ignore"):
        return np.log(np.abs(boundary_values(f, t, spec)))


@dataclass(frozen=True)
class RadialLimit:
    """
    Attributes:
        value       : Extrapolated boundary value.
        residual    : Difference between the extrapolations from (eps, eps/2) and from (eps/2, eps/4).
        available   : Whether the residual is within `limit_residual`.
    """

    value: complex
    residual: float
    available: bool


def _unimodular(zeta: complex) -> complex:
    zeta = complex(zeta)
    if not math.isfinite(abs(zeta)) or abs(abs(zeta) - 1.0) > UNIMODULAR_TOLERANCE:
        raise DomainError(value=zeta, constraint="|zeta| = 1")
    return zeta / abs(zeta)


def radial_limit(f: Function, zeta: complex, spec: QuadratureSpec | None = None) -> RadialLimit:
    """
    Radial limit of f at the boundary point zeta, with a stability check on a third radius.

    Raises:
        DomainError: If |zeta| != 1.
    """
    spec = spec or QuadratureSpec()
    unit = np.array([_unimodular(zeta)])
    node = as_function(f)
    epsilon = spec.boundary_epsilon
    coarse = complex(_extrapolate(node, unit, epsilon)[0])
    fine = complex(_extrapolate(node, unit, 0.5 * epsilon)[0])
    residual = abs(fine - coarse)
    available = math.isfinite(residual) and residual <= spec.limit_residual * max(1.0, abs(fine))
    return RadialLimit(value=fine, residual=residual, available=available)


@dataclass(frozen=True)
class OuterCheck:
    """
    Diagnostic of an outerness test.

    Attributes:
        is_outer        : Verdict.
        log_at_zero     : log|f(0)|.
        boundary_mean   : Mean of log|f| over the circle.
        gap             : |log_at_zero - boundary_mean|.
        converged       : Whether the boundary mean met the quadrature tolerance.
        reason          : Why the verdict is negative; empty otherwise.
    """

    is_outer: bool
    log_at_zero: float
    boundary_mean: float
    gap: float
    converged: bool = True
    reason: str = ""

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def is_outer(f: Function, tol: float = DEFAULT_OUTER_TOLERANCE, spec: QuadratureSpec | None = None) -> OuterCheck:
    """
    Tests whether log|f(0)| equals the boundary mean of log|f|, which characterises outer functions among the
    zero-free ones.

    Boundary values come from radial extrapolation, which is only reliable farther than about sqrt(eps) from a
    boundary singularity, so exclusion windows around singular angles stop shrinking there.

    Args:
        f       : Function to test.
        tol     : Largest accepted gap.
        spec    : Quadrature specification.
    """
    if isinstance(f, OuterFn):
        mean = float(f.coefficients[0].real)
        return OuterCheck(is_outer=True, log_at_zero=mean, boundary_mean=mean, gap=0.0, reason="")

    spec = spec or QuadratureSpec()
    node = as_function(f)
    with np.errstate(all="ignore"):
        at_zero = complex(node._evaluate(np.zeros(1, dtype=complex))[0])
    if at_zero == 0 or not np.isfinite(at_zero):
        return OuterCheck(
            is_outer=False, log_at_zero=-math.inf, boundary_mean=math.nan, gap=math.inf, reason="f vanishes at 0"
        )

    floor = max(spec.singular_exclusion, math.sqrt(spec.boundary_epsilon))
    window_spec = dataclasses.replace(spec, singular_exclusion=floor)
    log_at_zero = math.log(abs(at_zero))
    try:
        result = circle_integral(
            lambda t: boundary_log_modulus(node, t, spec),
            function_angles(node),
            window_spec,
        )
    except NonFiniteSampleError as exc:
        return OuterCheck(
            is_outer=False,
            log_at_zero=log_at_zero,
            boundary_mean=math.nan,
            gap=math.inf,
            converged=False,
            reason=f"log|f| is not finite on the circle at t = {exc.location!r}",
        )

    mean = result.value / TWO_PI
    gap = abs(log_at_zero - mean)
    verdict = gap <= tol
    reason = "" if verdict else f"log|f(0)| = {log_at_zero:.9g} but the boundary mean of log|f| is {mean:.9g}"
    log.debug("Outer check: log|f(0)| = %.12g, boundary mean %.12g, gap %.3g", log_at_zero, mean, gap)
    return OuterCheck(
        is_outer=verdict,
        log_at_zero=log_at_zero,
        boundary_mean=mean,
        gap=gap,
        converged=result.converged,
        reason=reason,
    )


@dataclass(frozen=True)
class SupNormEstimate:
    """max |f| sampled on the circle of the given radius."""

    value: float
    radius: float
    angle: float = 0.0

    def to_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


def sup_norm_estimate(f: Function, spec: QuadratureSpec | None = None) -> SupNormEstimate:
    """
    Samples |f| on the circle of radius 1 - `sup_radius_gap` at `outer_grid` uniform angles plus the singular
    angles, and returns the largest value.
    """
    spec = spec or QuadratureSpec()
    node = as_function(f)
    radius = 1.0 - spec.sup_radius_gap
    angles = np.concatenate((TWO_PI * np.arange(spec.outer_grid) / spec.outer_grid, function_angles(f)))
    with np.errstate(all="ignore"):
        moduli = np.abs(node._evaluate(radius * np.exp(1j * angles)))
    moduli = np.where(np.isnan(moduli), math.inf, moduli)
    best = int(np.argmax(moduli))
    return SupNormEstimate(value=float(moduli[best]), radius=radius, angle=float(angles[best]))


def outer_min(f: Function, g: Function, spec: QuadratureSpec | None = None) -> OuterFn:
    """
    The outer function f ^ g with |f ^ g| = min(|f|, |g|) on the circle.

    Raises:
        NotOuterError: If one of the arguments fails `is_outer`.
    """
    spec = spec or QuadratureSpec()
    for side, function in (("left", f), ("right", g)):
        check = is_outer(function, spec=spec)
        if not check.is_outer:
            raise NotOuterError(reason=f"{side} argument: {check.reason}")

    angles = normalize_angles((*function_angles(f), *function_angles(g)))

    def log_modulus(t: np.ndarray) -> np.ndarray:
        return np.minimum(boundary_log_modulus(f, t, spec), boundary_log_modulus(g, t, spec))

    return OuterFn.from_boundary(log_modulus, angles, spec.outer_grid)
