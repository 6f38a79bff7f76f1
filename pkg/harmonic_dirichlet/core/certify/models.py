from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Literal, Mapping

from typing_extensions import TypeAlias

from harmonic_dirichlet.core.exceptions import ValidationError
from harmonic_dirichlet.core.quadrature.result import TailProfile

Verdict: TypeAlias = Literal["SUFFICIENT_CYCLIC", "INCONCLUSIVE", "DIVERGENT_EVIDENCE"]
"""Outcome of a cyclicity certificate. There is deliberately no negative verdict."""

ReportStatus: TypeAlias = Literal["PASS", "FAIL", "SKIP"]

DEFAULT_REL_SLACK = 1e-6
"""Relative slack allowed on the right-hand side of a verified inequality."""

RULE_LOG = "outer g with log g in D(mu) is cyclic, through D(mu) in N+(D(mu))"
RULE_ITERLOG = "outer g with ||g||_inf <= 1 and G_n(log 1/g) in D(mu) is cyclic"
RULE_GROWTH = "int |g'|^2 |G_n(1/(1 - |z|^2))|^2 dA < inf makes the cyclicity criteria for g equivalent"


def _complex_pair(value: complex | None) -> list[float] | None:
    return None if value is None else [value.real, value.imag]


@dataclass(frozen=True)
class Check:
    """
    Outcome of one precondition.

    Attributes:
        passed  : Whether the precondition holds on the sampled data.
        detail  : Human readable description of what was checked or what failed.
        sample  : The failing (or extremal) disc point, when there is one.
    """

    passed: bool
    detail: str = ""
    sample: complex | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "detail": self.detail, "sample": _complex_pair(self.sample)}


@dataclass(frozen=True)
class PreconditionFlags:
    """Precondition outcomes of a certificate; None marks a precondition the rule does not need."""

    outer: Check | None = None
    sup_norm: Check | None = None
    nonvanishing: Check | None = None

    def items(self) -> Iterable[tuple[str, Check]]:
        for name in ("outer", "sup_norm", "nonvanishing"):
            check = getattr(self, name)
            if check is not None:
                yield name, check

    @property
    def passed(self) -> bool:
        return all(check.passed for _, check in self.items())

    @property
    def failures(self) -> list[str]:
        return [f"{name}: {check.detail}" for name, check in self.items() if not check.passed]

    def to_dict(self) -> dict[str, Any]:
        return {name: check.to_dict() for name, check in self.items()}


@dataclass(frozen=True)
class Quantity:
    """A computed value with its absolute error bar; inf when the defining integral diverges."""

    value: float
    error: float = 0.0

    def to_dict(self) -> dict[str, float]:
        return {"value": self.value, "error": self.error}


@dataclass(frozen=True)
class Certificate:
    """
    Cyclicity certificate.

    Attributes:
        verdict                 : SUFFICIENT_CYCLIC, INCONCLUSIVE or DIVERGENT_EVIDENCE.
        rule                    : Citation of the sufficient condition that was tested.
        quantities              : Named seminorm values with error bars.
        profiles                : Named tail profiles of the integrals behind the quantities.
        preconditions           : Precondition outcomes.
        decisive                : Names of the profiles the verdict rests on.
        applies_equivalences    : Set when the growth condition holds, so that the equivalence list for g applies.
        reasons                 : Why the verdict is not SUFFICIENT_CYCLIC.
    """

    verdict: Verdict
    rule: str
    quantities: Mapping[str, Quantity] = field(default_factory=dict)
    profiles: Mapping[str, TailProfile] = field(default_factory=dict)
    preconditions: PreconditionFlags = field(default_factory=PreconditionFlags)
    decisive: tuple[str, ...] = ()
    applies_equivalences: bool = False
    reasons: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "decisive", tuple(self.decisive))
        object.__setattr__(self, "reasons", tuple(self.reasons))
        if self.verdict != "SUFFICIENT_CYCLIC":
            return

        if not self.preconditions.passed:
            raise ValidationError(quantity="certificate", detail="SUFFICIENT_CYCLIC with failed preconditions")
        if not self.decisive:
            raise ValidationError(quantity="certificate", detail="SUFFICIENT_CYCLIC without a decisive profile")
        for name in self.decisive:
            profile = self.profiles.get(name)
            if profile is None or profile.classification != "CONVERGENT":
                raise ValidationError(quantity="certificate", detail=f"decisive profile {name!r} is not CONVERGENT")

    @property
    def sufficient(self) -> bool:
        return self.verdict == "SUFFICIENT_CYCLIC"

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "rule": self.rule,
            "quantities": {name: q.to_dict() for name, q in self.quantities.items()},
            "profiles": {name: p.to_dict() for name, p in self.profiles.items()},
            "preconditions": self.preconditions.to_dict(),
            "decisive": list(self.decisive),
            "applies_equivalences": self.applies_equivalences,
            "reasons": list(self.reasons),
        }


@dataclass(frozen=True)
class InequalityRow:
    """
    One sample of a verified inequality lhs <= rhs.

    Attributes:
        label       : Which sample (a parameter value, an annulus, a grid point).
        lhs         : Left-hand side.
        rhs         : Right-hand side.
        lhs_error   : Error bar of the left-hand side.
        rhs_error   : Error bar of the right-hand side.
    """

    label: str
    lhs: float
    rhs: float
    lhs_error: float = 0.0
    rhs_error: float = 0.0

    @property
    def violation(self) -> float:
        """lhs - rhs; negative when the inequality holds. An infinite rhs is never violated."""
        if self.rhs == math.inf:
            return -math.inf
        if math.isnan(self.lhs) or math.isnan(self.rhs):
            return math.inf
        return self.lhs - self.rhs

    def tolerance(self, rel_slack: float) -> float:
        return rel_slack * max(1.0, abs(self.rhs)) + self.lhs_error + self.rhs_error

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_error": self.lhs_error,
            "rhs_error": self.rhs_error,
            "violation": self.violation,
        }


@dataclass(frozen=True)
class InequalityReport:
    """
    Numerical verification of an inequality over a set of samples.

    Attributes:
        claim           : The statement being verified.
        samples         : Description of the sample set.
        rows            : Left and right sides per sample.
        max_violation   : lhs - rhs of the worst row; negative means satisfied.
        tolerance       : Tolerance of the worst row.
        status          : PASS iff max_violation <= tolerance; SKIP when a hypothesis failed.
        reason          : Why the report was skipped or failed.
        quantities      : Auxiliary values (norms, constants) the rows were built from.
    """

    claim: str
    samples: str
    rows: tuple[InequalityRow, ...] = ()
    max_violation: float = math.nan
    tolerance: float = 0.0
    status: ReportStatus = "SKIP"
    reason: str = ""
    quantities: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def from_rows(
        cls,
        claim: str,
        samples: str,
        rows: Iterable[InequalityRow],
        rel_slack: float = DEFAULT_REL_SLACK,
        quantities: Mapping[str, float] | None = None,
    ) -> InequalityReport:
        """
        Grades the rows. The worst row is the one whose violation exceeds its own tolerance by the most.

        Args:
            claim       : The statement being verified.
            samples     : Description of the sample set.
            rows        : Samples of the inequality.
            rel_slack   : Relative slack on the right-hand side.
            quantities  : Auxiliary values to attach.
        """
        rows = tuple(rows)
        if not rows:
            return cls.skipped(claim, samples, "no samples", quantities)

        worst = max(rows, key=lambda row: row.violation - row.tolerance(rel_slack))
        max_violation = worst.violation
        tolerance = worst.tolerance(rel_slack)
        passed = max_violation <= tolerance
        return cls(
            claim=claim,
            samples=samples,
            rows=rows,
            max_violation=max_violation,
            tolerance=tolerance,
            status="PASS" if passed else "FAIL",
            reason="" if passed else f"violated at {worst.label}",
            quantities=dict(quantities or {}),
        )

    @classmethod
    def skipped(
        cls,
        claim: str,
        samples: str,
        reason: str,
        quantities: Mapping[str, float] | None = None,
    ) -> InequalityReport:
        return cls(claim=claim, samples=samples, status="SKIP", reason=reason, quantities=dict(quantities or {}))

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "samples": self.samples,
            "rows": [row.to_dict() for row in self.rows],
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "status": self.status,
            "reason": self.reason,
            "quantities": dict(self.quantities),
        }
