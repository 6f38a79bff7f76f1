"""
Sufficient conditions for cyclicity in D(mu), checked through the finiteness of disc integrals.

Membership of F = G_n(log 1/g) in D(mu) needs two finite integrals: the D_mu seminorm of F, with integrand
|F'|^2 P_mu, and its H^2 norm, written through the Littlewood-Paley identity

    ||F||^2 = |F(0)|^2 + (2/pi) int |F'(z)|^2 log(1/|z|) dA(z).

Both derivatives come from the chain rule F' = -G_n'(log 1/g) g'/g. Each integral is profiled over dyadic annuli
and the certificate only reports SUFFICIENT_CYCLIC when every profile is CONVERGENT.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from harmonic_dirichlet.core.certify.models import (
    RULE_GROWTH,
    RULE_ITERLOG,
    RULE_LOG,
    Certificate,
    PreconditionFlags,
    Quantity,
    Verdict,
)
from harmonic_dirichlet.core.certify.preconditions import check_preconditions
from harmonic_dirichlet.core.exceptions import DomainError, NonFiniteSampleError
from harmonic_dirichlet.core.functions.boundary import Function, function_angles
from harmonic_dirichlet.core.functions.expression import analytic_log, as_function
from harmonic_dirichlet.core.iterlog import iterate_log, iterate_log_derivative
from harmonic_dirichlet.core.measure import CircleMeasure
from harmonic_dirichlet.core.quadrature.disc import disc_integral, tail_profile
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.points import DiscIntegrand, DiscPoints
from harmonic_dirichlet.core.quadrature.result import TailProfile
from harmonic_dirichlet.core.quadrature.rules import normalize_angles

log = logging.getLogger(__name__)

LITTLEWOOD_PALEY = 2.0 / math.pi

H2_QUANTITY = "h2_norm_sq"
SEMINORM_QUANTITY = "dmu_seminorm_sq"
GROWTH_QUANTITY = "growth_integral"


def _check_count(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(value=n, constraint="n is a nonnegative integer")


def iterlog_derivative_sq(g: Function, n: int) -> DiscIntegrand:
    """|F'|^2 for F = G_n(log 1/g), i.e. |G_n'(log 1/g)|^2 |g'/g|^2."""
    node = as_function(g)
    derivative = node.derivative

    def integrand(points: DiscPoints) -> np.ndarray:
        z = points.z
        with np.errstate(all="ignore"):
            slope = derivative._evaluate(z) / node._evaluate(z)
            if n > 0:
                slope = slope * iterate_log_derivative(n, -analytic_log(node, z))
            return np.abs(slope) ** 2

    return integrand


def seminorm_integrand(g: Function, mu: CircleMeasure, n: int) -> DiscIntegrand:
    """|F'|^2 P_mu for F = G_n(log 1/g)."""
    derivative_sq = iterlog_derivative_sq(g, n)

    def integrand(points: DiscPoints) -> np.ndarray:
        return derivative_sq(points) * mu.poisson(points)

    return integrand


def _h2_integrand(g: Function, n: int) -> DiscIntegrand:
    derivative_sq = iterlog_derivative_sq(g, n)

    def integrand(points: DiscPoints) -> np.ndarray:
        return LITTLEWOOD_PALEY * derivative_sq(points) * -np.log1p(-points.d)

    return integrand


def _value_at_zero(g: Function, n: int) -> complex:
    node = as_function(g)
    origin = np.zeros(1, dtype=complex)
    with np.errstate(all="ignore"):
        return complex(iterate_log(n, -analytic_log(node, origin))[0])


def _energy(integrand: DiscIntegrand, angles: tuple[float, ...], spec: QuadratureSpec) -> tuple[Quantity, TailProfile]:
    profile = tail_profile(integrand, spec, angles)
    if profile.classification == "DIVERGENT":
        return Quantity(math.inf, math.inf), profile
    result = disc_integral(integrand, spec, angles)
    return Quantity(result.value, result.error), profile


def _verdict(profiles: dict[str, TailProfile]) -> Verdict:
    classes = [p.classification for p in profiles.values()]
    if all(c == "CONVERGENT" for c in classes):
        return "SUFFICIENT_CYCLIC"
    if any(c == "DIVERGENT" for c in classes):
        return "DIVERGENT_EVIDENCE"
    return "INCONCLUSIVE"


def _withheld(rule: str, flags: PreconditionFlags) -> Certificate:
    reasons = tuple(f"precondition failed: {failure}" for failure in flags.failures)
    log.info("Certificate withheld: %s", "; ".join(reasons))
    return Certificate(verdict="INCONCLUSIVE", rule=rule, preconditions=flags, reasons=reasons)


def _membership_certificate(
    g: Function,
    mu: CircleMeasure,
    n: int,
    spec: QuadratureSpec,
    rule: str,
    flags: PreconditionFlags,
) -> Certificate:
    """D(mu)-membership test of G_n(log 1/g) once the preconditions have passed."""
    angles = normalize_angles((*function_angles(g), *mu.singular_angles))
    quantities: dict[str, Quantity] = {}
    profiles: dict[str, TailProfile] = {}
    try:
        energy, profiles[H2_QUANTITY] = _energy(_h2_integrand(g, n), angles, spec)
        quantities[H2_QUANTITY] = Quantity(abs(_value_at_zero(g, n)) ** 2 + energy.value, energy.error)
        if mu.is_zero:
            quantities[SEMINORM_QUANTITY] = Quantity(0.0, 0.0)
        else:
            seminorm, profiles[SEMINORM_QUANTITY] = _energy(seminorm_integrand(g, mu, n), angles, spec)
            quantities[SEMINORM_QUANTITY] = Quantity(seminorm.value / math.pi, seminorm.error / math.pi)
    except NonFiniteSampleError as exc:
        return Certificate(
            verdict="INCONCLUSIVE",
            rule=rule,
            preconditions=flags,
            reasons=(f"integrand is not finite: {exc}",),
        )

    verdict = _verdict(profiles)
    reasons = tuple(
        f"{name} tail is {profile.classification}"
        for name, profile in profiles.items()
        if profile.classification != "CONVERGENT"
    )
    log.debug("G_%d(log 1/g) membership: %s %s", n, verdict, {k: p.classification for k, p in profiles.items()})
    return Certificate(
        verdict=verdict,
        rule=rule,
        quantities=quantities,
        profiles=profiles,
        preconditions=flags,
        decisive=tuple(profiles),
        reasons=reasons,
    )


def certify_log(g: Function, mu: CircleMeasure, spec: QuadratureSpec | None = None) -> Certificate:
    """
    Tests log g in D(mu), which makes g cyclic.

    g has to be outer and zero-free; otherwise the verdict is withheld as INCONCLUSIVE with the failed checks.

    Args:
        g       : Candidate cyclic function.
        mu      : Measure of the space D(mu).
        spec    : Quadrature specification.
    """
    spec = spec or QuadratureSpec()
    flags = check_preconditions(g, spec, outer=True, sup_norm=False, nonvanishing=True)
    if not flags.passed:
        return _withheld(RULE_LOG, flags)
    return _membership_certificate(g, mu, 0, spec, RULE_LOG, flags)


def certify_iterlog(g: Function, mu: CircleMeasure, n: int, spec: QuadratureSpec | None = None) -> Certificate:
    """
    Tests G_n(log 1/g) in D(mu) for an outer, zero-free g with ||g||_inf <= 1, which makes g cyclic.

    n = 0 is the log g route under the extra sup-norm hypothesis.

    Raises:
        DomainError: If n is not a nonnegative integer.
    """
    _check_count(n)
    spec = spec or QuadratureSpec()
    flags = check_preconditions(g, spec, outer=True, sup_norm=True, nonvanishing=True)
    if not flags.passed:
        return _withheld(RULE_ITERLOG, flags)
    return _membership_certificate(g, mu, n, spec, RULE_ITERLOG, flags)


def growth_profile(
    derivative_sq: DiscIntegrand,
    n: int,
    spec: QuadratureSpec | None = None,
    singular_angles: tuple[float, ...] = (),
) -> TailProfile:
    """
    Tail profile of |g'(z)|^2 |G_n(1/(1 - |z|^2))|^2 for a given |g'|^2.

    Args:
        derivative_sq   : |g'|^2 on polar points, closed form or a surrogate.
        n               : Order of the iterated logarithm.
        spec            : Quadrature specification.
        singular_angles : Where |g'|^2 concentrates.
    """
    _check_count(n)
    spec = spec or QuadratureSpec()
    return tail_profile(_growth_integrand(derivative_sq, n), spec, singular_angles)


def _growth_integrand(derivative_sq: DiscIntegrand, n: int) -> DiscIntegrand:
    def integrand(points: DiscPoints) -> np.ndarray:
        majorant = iterate_log(n, 1.0 / points.one_minus_modulus_sq).real
        return derivative_sq(points) * majorant**2

    return integrand


def certify_growth(g: Function, n: int, spec: QuadratureSpec | None = None) -> Certificate:
    """
    Tests int |g'|^2 |G_n(1/(1 - |z|^2))|^2 dA < inf for a zero-free g with ||g||_inf <= 1.

    A convergent integral sets `applies_equivalences`: g (G_n o log 1/g) lies in D(mu) for every mu, so the list of
    equivalent cyclicity conditions holds for g. That alone does not decide cyclicity, so the verdict stays
    INCONCLUSIVE; a divergent integral gives DIVERGENT_EVIDENCE.

    Raises:
        DomainError: If n is not a nonnegative integer.
    """
    _check_count(n)
    spec = spec or QuadratureSpec()
    flags = check_preconditions(g, spec, outer=False, sup_norm=True, nonvanishing=True)
    if not flags.passed:
        return _withheld(RULE_GROWTH, flags)

    node = as_function(g)
    derivative = node.derivative

    def derivative_sq(points: DiscPoints) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.abs(derivative._evaluate(points.z)) ** 2

    angles = function_angles(g)
    try:
        quantity, profile = _energy(_growth_integrand(derivative_sq, n), angles, spec)
    except NonFiniteSampleError as exc:
        return Certificate(
            verdict="INCONCLUSIVE", rule=RULE_GROWTH, preconditions=flags, reasons=(f"integrand is not finite: {exc}",)
        )

    converged = profile.classification == "CONVERGENT"
    verdict: Verdict = "DIVERGENT_EVIDENCE" if profile.classification == "DIVERGENT" else "INCONCLUSIVE"
    if converged:
        reasons: tuple[str, ...] = ("the growth condition makes the equivalences apply; it does not decide cyclicity",)
    else:
        reasons = (f"{GROWTH_QUANTITY} tail is {profile.classification}",)
    log.debug("Growth condition for n = %d: %s", n, profile.classification)
    return Certificate(
        verdict=verdict,
        rule=RULE_GROWTH,
        quantities={GROWTH_QUANTITY: quantity},
        profiles={GROWTH_QUANTITY: profile},
        preconditions=flags,
        decisive=(GROWTH_QUANTITY,),
        applies_equivalences=converged,
        reasons=reasons,
    )
