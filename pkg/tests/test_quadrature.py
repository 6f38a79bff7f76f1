from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
import pytest

from harmonic_dirichlet.core.exceptions import InvalidQuadratureSpecError, ProblemFileError
from harmonic_dirichlet.core.quadrature import QuadratureSpec, circle_integral, disc_integral
from harmonic_dirichlet.core.quadrature.disc import tail_profile
from harmonic_dirichlet.core.quadrature.points import DiscPoints
from harmonic_dirichlet.core.quadrature.result import TailProfile
from harmonic_dirichlet.core.quadrature.rules import TWO_PI, normalize_angles


def _shape(points: DiscPoints) -> tuple[int, ...]:
    return np.broadcast(points.d, points.theta).shape


@dataclass
class DiscTestCase:
    test_id: str
    integrand: object
    expected: float


disc_cases = [
    DiscTestCase("constant", lambda p: np.ones(_shape(p)), math.pi),
    DiscTestCase("modulus squared", lambda p: np.broadcast_to(p.r**2, _shape(p)), 0.5 * math.pi),
    DiscTestCase("poisson kernel", lambda p: np.broadcast_to(p.poisson_kernel(1.0), _shape(p)), math.pi),
]


@pytest.mark.parametrize("case", disc_cases, ids=[case.test_id for case in disc_cases])
def test_disc_integral(case: DiscTestCase) -> None:
    result = disc_integral(case.integrand, QuadratureSpec(), (1.0,))  # type: ignore[arg-type]
    assert result.converged
    assert result.value == pytest.approx(case.expected, rel=1e-7)


def test_circle_integral_smooth() -> None:
    result = circle_integral(lambda t: np.cos(t) ** 2, (), QuadratureSpec())
    assert result.converged
    assert result.value == pytest.approx(math.pi, rel=1e-12)


def test_circle_integral_log_singularity() -> None:
    def integrand(t: np.ndarray) -> np.ndarray:
        return np.log(np.abs(1.0 - np.exp(1j * t)))

    result = circle_integral(integrand, (0.0,), QuadratureSpec())
    assert result.converged
    assert result.value == pytest.approx(0.0, abs=1e-6)


@dataclass
class TailTestCase:
    test_id: str
    annuli: tuple[float, ...]
    expected: str


tail_cases = [
    TailTestCase("geometric", tuple(0.5**k for k in range(24)), "CONVERGENT"),
    TailTestCase("vanishing", (0.0,) * 24, "CONVERGENT"),
    TailTestCase("constant", (1.0,) * 24, "DIVERGENT"),
    TailTestCase("harmonic", tuple(1.0 / (k + 1) for k in range(24)), "INCONCLUSIVE"),
    TailTestCase("too short", (1.0,), "INCONCLUSIVE"),
]


@pytest.mark.parametrize("case", tail_cases, ids=[case.test_id for case in tail_cases])
def test_tail_classification(case: TailTestCase) -> None:
    assert TailProfile(case.annuli).classification == case.expected


def test_normalize_angles() -> None:
    assert normalize_angles((-math.pi, math.pi, TWO_PI, 0.0)) == (0.0, math.pi)


@dataclass
class SpecErrorTestCase:
    test_id: str
    fields: dict


spec_error_cases = [
    SpecErrorTestCase("no workers", {"workers": 0}),
    SpecErrorTestCase("refinement factor", {"refinement_factor": 1.0}),
    SpecErrorTestCase("negative tolerance", {"rel_tol": -1.0}),
    SpecErrorTestCase("window too wide", {"tail_window": 30, "tail_annuli": 24}),
    SpecErrorTestCase("grid not a power of two", {"outer_grid": 1000}),
    SpecErrorTestCase("boundary epsilon", {"boundary_epsilon": 0.5}),
]


@pytest.mark.parametrize("case", spec_error_cases, ids=[case.test_id for case in spec_error_cases])
def test_quadrature_spec_rejects(case: SpecErrorTestCase) -> None:
    with pytest.raises(InvalidQuadratureSpecError):
        QuadratureSpec(**case.fields)


def test_quadrature_spec_from_dict() -> None:
    spec = QuadratureSpec.from_dict({"angular_nodes": 256, "rel_tol": 1e-6}, "/quadrature")
    assert spec.angular_nodes == 256
    assert spec.rel_tol == 1e-6
    assert QuadratureSpec.from_dict(spec.to_dict()) == spec


@pytest.mark.parametrize(
    "data, pointer",
    [
        ({"bogus": 1}, "/quadrature/bogus"),
        ({"angular_nodes": 1.5}, "/quadrature/angular_nodes"),
        ({"rel_tol": "small"}, "/quadrature/rel_tol"),
    ],
)
def test_quadrature_spec_from_dict_pointer(data: dict, pointer: str) -> None:
    with pytest.raises(ProblemFileError) as exc_info:
        QuadratureSpec.from_dict(data, "/quadrature")
    assert exc_info.value.pointer == pointer


def test_with_resolution() -> None:
    spec = QuadratureSpec().with_resolution(2)
    assert spec.angular_nodes == 2 * QuadratureSpec().angular_nodes
    assert spec.radial_levels == 2 * QuadratureSpec().radial_levels


@dataclass
class TailFamilyTestCase:
    test_id: str
    integrand: object
    expected: str


tail_family_cases = [
    TailFamilyTestCase("bounded", lambda p: np.ones(_shape(p)), "CONVERGENT"),
    TailFamilyTestCase(
        "inverse distance", lambda p: np.broadcast_to(1.0 / p.one_minus_modulus_sq, _shape(p)), "DIVERGENT"
    ),
    TailFamilyTestCase(
        "inverse square distance", lambda p: np.broadcast_to(p.one_minus_modulus_sq**-2, _shape(p)), "DIVERGENT"
    ),
]


@pytest.mark.parametrize("case", tail_family_cases, ids=[case.test_id for case in tail_family_cases])
def test_tail_classification_is_stable_under_refinement(case: TailFamilyTestCase) -> None:
    spec = QuadratureSpec()
    finer = dataclasses.replace(spec.with_resolution(2), tail_annuli=2 * spec.tail_annuli)
    coarse = tail_profile(case.integrand, spec)  # type: ignore[arg-type]
    fine = tail_profile(case.integrand, finer)  # type: ignore[arg-type]
    assert coarse.classification == fine.classification == case.expected


def test_disc_integral_without_decay_is_not_converged() -> None:
    result = disc_integral(lambda p: np.broadcast_to(1.0 / p.one_minus_modulus_sq, _shape(p)), QuadratureSpec())
    assert not result.converged
    assert result.tail == 0.0
