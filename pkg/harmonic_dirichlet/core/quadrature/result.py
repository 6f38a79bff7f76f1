from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal, Sequence

from typing_extensions import TypeAlias

TailVerdict: TypeAlias = Literal["CONVERGENT", "DIVERGENT", "INCONCLUSIVE"]
"""Three-way finiteness verdict of a disc integral."""

RATIO_CONVERGENCE = 0.75
"""Annulus ratios at or below this across the window count as geometric decay."""

RAABE_CONVERGENCE = 1.5
RAABE_DIVERGENCE = 0.5

BOUNDED_BELOW_FRACTION = 0.9
"""The tail is bounded below when no annulus in the window drops under this fraction of the first."""


@dataclass(frozen=True)
class QuadratureResult:
    """
    Value of an integral together with its error estimate.

    Attributes:
        value   : The integral, tail correction included.
        error   : Estimated absolute error. Infinite when the tail does not decay.
        levels  : Number of annuli (or panels) actually summed.
        tail    : Geometric estimate of the part beyond the last level.
    """

    value: float
    error: float
    levels: int = 0
    tail: float = 0.0

    @property
    def converged(self) -> bool:
        return math.isfinite(self.error)

    def scaled(self, factor: float) -> QuadratureResult:
        return QuadratureResult(self.value * factor, self.error * abs(factor), self.levels, self.tail * factor)

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "error": self.error, "levels": self.levels, "tail": self.tail}


@dataclass(frozen=True)
class CircleResult:
    """
    Result of a circle integral with shrinking exclusion windows.

    Attributes:
        value       : Integral over [0, 2pi), without the 1/(2pi) normalisation.
        error       : Last window-shrink increment plus the remaining window estimate.
        converged   : False when the window floor was hit before the tolerance was met.
        window      : Final exclusion half-width (0 when no singular angles were declared).
    """

    value: float
    error: float
    converged: bool = True
    window: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "error": self.error, "converged": self.converged, "window": self.window}


@dataclass(frozen=True)
class TailProfile:
    """
    Integrals over the dyadic annuli {1 - 2^-k <= |z| < 1 - 2^-(k+1)} and the verdict drawn from them.

    Attributes:
        annuli          : Annulus integrals a_k, k = 0, 1, ...
        window          : Number of trailing annuli the verdict is based on.
        abs_tol         : Values at or below this are treated as zero.
        classification  : Verdict, computed from the annuli.
        ratios          : a_(k+1)/a_k over the window.
        raabe           : Raabe statistics k(a_k/a_(k+1) - 1) over the window.
    """

    annuli: tuple[float, ...]
    window: int = 8
    abs_tol: float = 1e-12

    classification: TailVerdict = field(init=False)
    ratios: tuple[float, ...] = field(init=False)
    raabe: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        verdict, ratios, raabe = classify_tail(self.annuli, self.window, self.abs_tol)
        object.__setattr__(self, "classification", verdict)
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "raabe", raabe)

    @property
    def total(self) -> float:
        return math.fsum(self.annuli)

    def to_dict(self) -> dict[str, Any]:
        return {
            "annuli": [{"k": k, "integral": a} for k, a in enumerate(self.annuli)],
            "classification": self.classification,
            "ratios": list(self.ratios),
            "raabe": list(self.raabe),
            "window": self.window,
        }


def classify_tail(
    annuli: Sequence[float], window: int, abs_tol: float
) -> tuple[TailVerdict, tuple[float, ...], tuple[float, ...]]:
    """
    Classifies a sequence of nonnegative annulus integrals by the behaviour of its last `window` terms.

    Geometric decay, or a Raabe statistic bounded away above 1, is read as convergence. A tail bounded
    below, or a Raabe statistic bounded away below 1, is read as divergence. Everything in between is
    inconclusive.

    Args:
        annuli  : Annulus integrals a_0, a_1, ...
        window  : Number of trailing terms to inspect.
        abs_tol : Terms at or below this are considered zero.

    Returns:
        The verdict, the successive ratios and the Raabe statistics over the window.
    """
    values = [max(0.0, float(a)) for a in annuli]
    if len(values) < 2:
        return "INCONCLUSIVE", (), ()

    start = max(0, len(values) - window - 1)
    tail = values[start:]
    if all(a <= abs_tol for a in tail):
        return "CONVERGENT", (), ()

    ratios: list[float] = []
    raabe: list[float] = []
    for k in range(start, len(values) - 1):
        a, b = values[k], values[k + 1]
        ratios.append(b / a if a > 0 else math.inf)
        raabe.append(k * (a / b - 1.0) if b > 0 else math.inf)

    window_values = tail[1:]
    if all(r <= RATIO_CONVERGENCE for r in ratios):
        verdict: TailVerdict = "CONVERGENT"
    elif all(r >= RAABE_CONVERGENCE for r in raabe):
        verdict = "CONVERGENT"
    elif min(window_values) >= BOUNDED_BELOW_FRACTION * tail[0] or all(r <= RAABE_DIVERGENCE for r in raabe):
        verdict = "DIVERGENT"
    else:
        verdict = "INCONCLUSIVE"

    return verdict, tuple(ratios), tuple(raabe)
