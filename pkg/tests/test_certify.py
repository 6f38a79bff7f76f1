from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import pytest

from harmonic_dirichlet.core.certify import (
    Certificate,
    Check,
    InequalityReport,
    InequalityRow,
    PreconditionFlags,
    certify_growth,
    certify_iterlog,
    certify_log,
    growth_profile,
)
from harmonic_dirichlet.core.corpus import HALF_AFFINE, ONE
from harmonic_dirichlet.core.exceptions import DomainError, ValidationError
from harmonic_dirichlet.core.functions import decode_function, identity
from harmonic_dirichlet.core.measure import CircleMeasure
from harmonic_dirichlet.core.quadrature.points import DiscPoints
from harmonic_dirichlet.core.quadrature.result import TailProfile

CONVERGENT = TailProfile(tuple(0.5**k for k in range(24)))
DIVERGENT = TailProfile((1.0,) * 24)


@dataclass
class CertificateTestCase:
    test_id: str
    function: Any
    measure: str
    verdict: str


log_cases = [
    CertificateTestCase("constant on lebesgue", ONE, "lebesgue", "SUFFICIENT_CYCLIC"),
    CertificateTestCase("half affine on atom", HALF_AFFINE, "dirac(pi)", "SUFFICIENT_CYCLIC"),
    CertificateTestCase("half affine on lebesgue", HALF_AFFINE, "lebesgue", "DIVERGENT_EVIDENCE"),
]


@pytest.mark.parametrize("case", log_cases, ids=[case.test_id for case in log_cases])
def test_certify_log(case: CertificateTestCase) -> None:
    certificate = certify_log(decode_function(case.function), CircleMeasure.preset(case.measure))
    assert certificate.verdict == case.verdict
    assert certificate.preconditions.passed
    assert certificate.sufficient == (case.verdict == "SUFFICIENT_CYCLIC")


def test_certify_log_withholds_for_vanishing_function() -> None:
    certificate = certify_log(identity(), CircleMeasure.lebesgue())
    assert certificate.verdict == "INCONCLUSIVE"
    assert not certificate.preconditions.passed
    assert all(reason.startswith("precondition failed") for reason in certificate.reasons)


def test_certify_iterlog() -> None:
    g = decode_function(HALF_AFFINE)
    mu = CircleMeasure.lebesgue()
    assert not certify_iterlog(g, mu, 0).sufficient
    assert certify_iterlog(g, mu, 2).verdict == "SUFFICIENT_CYCLIC"

    with pytest.raises(DomainError):
        certify_iterlog(g, mu, -1)


def test_certify_growth() -> None:
    certificate = certify_growth(decode_function(HALF_AFFINE), 2)
    assert certificate.applies_equivalences
    assert certificate.verdict == "INCONCLUSIVE"
    assert certificate.decisive == ("growth_integral",)
    assert certificate.to_dict()["applies_equivalences"] is True


def test_sufficient_certificate_needs_convergent_profiles() -> None:
    certificate = Certificate(
        verdict="SUFFICIENT_CYCLIC", rule="rule", profiles={"energy": CONVERGENT}, decisive=["energy"]
    )
    assert certificate.decisive == ("energy",)

    with pytest.raises(ValidationError):
        Certificate(verdict="SUFFICIENT_CYCLIC", rule="rule", profiles={"energy": DIVERGENT}, decisive=("energy",))
    with pytest.raises(ValidationError):
        Certificate(verdict="SUFFICIENT_CYCLIC", rule="rule")
    with pytest.raises(ValidationError):
        Certificate(
            verdict="SUFFICIENT_CYCLIC",
            rule="rule",
            profiles={"energy": CONVERGENT},
            decisive=("energy",),
            preconditions=PreconditionFlags(outer=Check(passed=False, detail="not outer")),
        )


def test_precondition_flags() -> None:
    flags = PreconditionFlags(outer=Check(True), nonvanishing=Check(False, "zero at 0", 0j))
    assert not flags.passed
    assert flags.failures == ["nonvanishing: zero at 0"]
    assert flags.to_dict() == {
        "outer": {"passed": True, "detail": "", "sample": None},
        "nonvanishing": {"passed": False, "detail": "zero at 0", "sample": [0.0, 0.0]},
    }


@dataclass
class RowTestCase:
    test_id: str
    row: InequalityRow
    violation: float


row_cases = [
    RowTestCase("holds", InequalityRow("a", 1.0, 2.0), -1.0),
    RowTestCase("violated", InequalityRow("b", 3.0, 2.0), 1.0),
    RowTestCase("infinite right side", InequalityRow("c", math.inf, math.inf), -math.inf),
    RowTestCase("nan", InequalityRow("d", math.nan, 1.0), math.inf),
]


@pytest.mark.parametrize("case", row_cases, ids=[case.test_id for case in row_cases])
def test_row_violation(case: RowTestCase) -> None:
    assert case.row.violation == case.violation


def test_report_grading() -> None:
    rows = [InequalityRow("small", 1.0, 2.0), InequalityRow("tight", 2.0 + 1e-9, 2.0)]
    report = InequalityReport.from_rows("x <= y", "two rows", rows)
    assert report.passed
    assert report.max_violation == pytest.approx(1e-9)

    failed = InequalityReport.from_rows("x <= y", "two rows", [*rows, InequalityRow("bad", 5.0, 1.0)])
    assert failed.status == "FAIL"
    assert failed.reason == "violated at bad"

    empty = InequalityReport.from_rows("x <= y", "nothing", [])
    assert empty.status == "SKIP"
    assert empty.reason == "no samples"


def test_growth_profile_of_bounded_derivative() -> None:
    def derivative_sq(points: DiscPoints) -> np.ndarray:
        return np.ones(np.broadcast(points.d, points.theta).shape)

    assert growth_profile(derivative_sq, 2).classification == "CONVERGENT"
