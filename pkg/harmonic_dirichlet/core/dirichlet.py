"""
Dirichlet-type quantities of analytic functions: the H^2 norm, the harmonically weighted seminorm D_mu and the
local Dirichlet integrals D_zeta.

Closed-form trees go through area quadrature of |f'|^2 against a Poisson integral. Trees holding sampled outer
functions have no closed-form derivative up to the boundary and go through their Taylor coefficients instead.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from harmonic_dirichlet.core.exceptions import DivergenceError, DomainError, NonFiniteSampleError
from harmonic_dirichlet.core.functions.boundary import (
    Function,
    boundary_values,
    function_angles,
    radial_limit,
)
from harmonic_dirichlet.core.functions.expression import as_function
from harmonic_dirichlet.core.measure import CircleMeasure
from harmonic_dirichlet.core.quadrature.circle import circle_integral
from harmonic_dirichlet.core.quadrature.disc import disc_integral, tail_profile
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.points import DiscPoints
from harmonic_dirichlet.core.quadrature.result import TailProfile
from harmonic_dirichlet.core.quadrature.rules import TWO_PI, normalize_angles
from harmonic_dirichlet.core.spectral import local_dirichlet_from_coefficients, spectral_estimate, spectral_seminorm

log = logging.getLogger(__name__)

UNIMODULAR_TOLERANCE = 1e-9


@dataclass(frozen=True)
class NormResult:
    """
    A (squared) norm with its error bar.

    Attributes:
        value   : The value; inf when the defining integral was classified divergent.
        error   : Estimated absolute error; inf when unknown.
        method  : How it was computed ("area", "spectral", "radial", "zero", or a combination).
        profile : Dyadic tail profile of the area integral, when one was computed.
    """

    value: float
    error: float
    method: str = "area"
    profile: TailProfile | None = None

    @property
    def infinite(self) -> bool:
        return self.value == math.inf

    @property
    def converged(self) -> bool:
        return math.isfinite(self.error)

    def __add__(self, other: NormResult) -> NormResult:
        """Sum of two norms; the profile of the right operand wins when both carry one."""
        return NormResult(
            value=self.value + other.value,
            error=self.error + other.error,
            method=f"{self.method}+{other.method}",
            profile=other.profile or self.profile,
        )

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "value": self.value,
            "error": self.error,
            "method": self.method,
            "infinite": self.infinite,
        }
        if self.profile is not None:
            result["profile"] = self.profile.to_dict()
        return result


def _unimodular(zeta: complex) -> complex:
    zeta = complex(zeta)
    if not math.isfinite(abs(zeta)) or abs(abs(zeta) - 1.0) > UNIMODULAR_TOLERANCE:
        raise DomainError(value=zeta, constraint="|zeta| = 1")
    return zeta / abs(zeta)


def _circle_mean_sq(f: Function, radius: float, spec: QuadratureSpec) -> float:
    node = as_function(f)

    def integrand(t: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.abs(node._evaluate(radius * np.exp(1j * t))) ** 2

    return circle_integral(integrand, function_angles(node), spec).value / TWO_PI


def h2_norm_sq(f: Function, spec: QuadratureSpec | None = None) -> NormResult:
    """
    ||f||^2 in H^2: the limit of the circle means of |f|^2 as r -> 1.

    The means are taken at 1 - eps, 1 - eps/2 and 1 - eps/4 and extrapolated linearly in 1 - r. Trees holding
    outer functions use Parseval on their Taylor coefficients.

    Raises:
        DivergenceError: If the two extrapolations disagree by more than `limit_residual`.
    """
    spec = spec or QuadratureSpec()
    if as_function(f).contains_outer:
        value, error = spectral_estimate(f, lambda a: float(np.sum(np.abs(a) ** 2)), spec)
        return NormResult(value=value, error=error, method="spectral")

    epsilon = spec.boundary_epsilon
    radii = (1.0 - epsilon, 1.0 - 0.5 * epsilon, 1.0 - 0.25 * epsilon)
    means = [_circle_mean_sq(f, r, spec) for r in radii]
    coarse = 2.0 * means[1] - means[0]
    fine = 2.0 * means[2] - means[1]
    residual = abs(fine - coarse)
    log.debug("H^2 circle means %s, extrapolations %.12g / %.12g", means, coarse, fine)
    if not math.isfinite(residual) or residual > spec.limit_residual * max(1.0, abs(fine)):
        raise DivergenceError(quantity="H^2 norm", radius=radii[-1])
    return NormResult(value=fine, error=residual, method="radial")


def _area_energy(f: Function, weight: Any, angles: tuple[float, ...], spec: QuadratureSpec) -> NormResult:
    """(1/pi) int |f'|^2 weight dA, reported infinite when its dyadic tail profile is divergent."""
    node = as_function(f)
    derivative = node.derivative

    def integrand(points: DiscPoints) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.abs(derivative._evaluate(points.z)) ** 2 * weight(points)

    profile = tail_profile(integrand, spec, angles)
    log.debug("Area integral tail classified %s", profile.classification)
    if profile.classification == "DIVERGENT":
        return NormResult(value=math.inf, error=math.inf, method="area", profile=profile)

    result = disc_integral(integrand, spec, angles).scaled(1.0 / math.pi)
    return NormResult(value=result.value, error=result.error, method="area", profile=profile)



def dmu_seminorm_sq(f: Function, mu: CircleMeasure, spec: QuadratureSpec | None = None) -> NormResult:
    """
    D_mu(f) = (1/pi) int_D |f'(z)|^2 P_mu(z) dA(z).

    Args:
        f       : Function.
        mu      : Positive measure on the circle, arc-length normalised.
        spec    : Quadrature specification.
    """
    spec = spec or QuadratureSpec()
    if mu.is_zero:
        return NormResult(value=0.0, error=0.0, method="zero")
    if as_function(f).contains_outer:
        value, error = spectral_estimate(f, lambda a: spectral_seminorm(a, mu), spec)
        return NormResult(value=value, error=error, method="spectral")

    angles = normalize_angles((*function_angles(f), *mu.singular_angles))
    return _area_energy(f, mu.poisson, angles, spec)


def dmu_norm_sq(f: Function, mu: CircleMeasure, spec: QuadratureSpec | None = None) -> NormResult:
    """||f||^2_(D(mu)) = ||f||^2_(H^2) + D_mu(f)."""
    spec = spec or QuadratureSpec()
    return h2_norm_sq(f, spec) + dmu_seminorm_sq(f, mu, spec)


def local_dirichlet_area(f: Function, zeta: complex, spec: QuadratureSpec | None = None) -> NormResult:
    """
    D_zeta(f) as (1/pi) int_D |f'(z)|^2 (1 - |z|^2)/|zeta - z|^2 dA(z), the D_mu seminorm of the Dirac mass
    2 pi delta_zeta.

    Raises:
        DomainError: If |zeta| != 1.
    """
    spec = spec or QuadratureSpec()
    zeta = _unimodular(zeta)
    if as_function(f).contains_outer:
        value, error = spectral_estimate(f, lambda a: local_dirichlet_from_coefficients(a, zeta), spec)
        return NormResult(value=value, error=error, method="spectral")

    angle = float(np.angle(zeta))
    angles = normalize_angles((*function_angles(f), angle))
    return _area_energy(f, lambda points: points.poisson_kernel(angle), angles, spec)


@dataclass(frozen=True)
class LocalDirichletResult:
    """
    Both forms of a local Dirichlet integral.

    Attributes:
        zeta                : Boundary point.
        area                : Weighted area form.
        boundary            : Boundary difference-quotient form, None when unavailable.
        boundary_error      : Error bar of the boundary form.
        boundary_converged  : Whether the boundary circle integral met its tolerance.
        reason              : Why the boundary form is unavailable.
    """

    zeta: complex
    area: NormResult
    boundary: float | None = None
    boundary_error: float = math.inf
    boundary_converged: bool = False
    reason: str = ""

    @property
    def value(self) -> float:
        return self.area.value

    @property
    def infinite(self) -> bool:
        return self.area.infinite

    @property
    def boundary_available(self) -> bool:
        return self.boundary is not None

    @property
    def agreement(self) -> float | None:
        """|area - boundary|, None when the boundary form is unavailable."""
        if self.boundary is None:
            return None
        return abs(self.area.value - self.boundary)

    def to_dict(self) -> dict[str, Any]:
        return {
            "zeta": [self.zeta.real, self.zeta.imag],
            "area": self.area.to_dict(),
            "boundary": self.boundary,
            "boundary_error": self.boundary_error,
            "boundary_available": self.boundary_available,
            "boundary_converged": self.boundary_converged,
            "infinite": self.infinite,
            "reason": self.reason,
        }


def local_dirichlet_boundary(f: Function, zeta: complex, spec: QuadratureSpec | None = None) -> LocalDirichletResult:
    """
    Computes D_zeta(f) in its area form and in its boundary form

        (1/2pi) int |f(e^(it)) - f(zeta)|^2 / |e^(it) - zeta|^2 dt

    on radially extrapolated boundary values.

    Raises:
        DomainError: If |zeta| != 1.
    """
    spec = spec or QuadratureSpec()
    zeta = _unimodular(zeta)
    area = local_dirichlet_area(f, zeta, spec)

    limit = radial_limit(f, zeta, spec)
    if not limit.available:
        reason = f"radial limit at zeta is unstable (residual {limit.residual:.3g})"
        log.debug("Boundary form unavailable: %s", reason)
        return LocalDirichletResult(zeta=zeta, area=area, reason=reason)

    def integrand(t: np.ndarray) -> np.ndarray:
        unit = np.exp(1j * t)
        with np.errstate(all="ignore"):
            return np.abs(boundary_values(f, t, spec) - limit.value) ** 2 / np.abs(unit - zeta) ** 2

    angles = normalize_angles((*function_angles(f), float(np.angle(zeta))))
    try:
        result = circle_integral(integrand, angles, spec)
    except NonFiniteSampleError as exc:
        return LocalDirichletResult(zeta=zeta, area=area, reason=f"boundary integrand failed: {exc}")

    return LocalDirichletResult(
        zeta=zeta,
        area=area,
        boundary=result.value / TWO_PI,
        boundary_error=result.error / TWO_PI,
        boundary_converged=result.converged,
        reason="" if result.converged else "boundary integral hit the window floor",
    )


def local_dirichlet_value(f: Function, zeta: complex, spec: QuadratureSpec | None = None) -> NormResult:
    """The single D_zeta(f) value used by the inequality checks."""
    return local_dirichlet_area(f, zeta, spec)
