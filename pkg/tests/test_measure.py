from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pytest

from harmonic_dirichlet.core.exceptions import DomainError, InvalidMeasureError, ProblemFileError
from harmonic_dirichlet.core.measure import CircleMeasure, parse_angle, poisson_integral, total_mass
from harmonic_dirichlet.core.quadrature.rules import TWO_PI

POINTS = np.array([0.0, 0.5, 0.3 - 0.4j, -0.7 + 0.7j])


def test_poisson_of_lebesgue_is_one() -> None:
    values = poisson_integral(CircleMeasure.lebesgue(), POINTS)
    assert values == pytest.approx(np.ones(POINTS.shape), abs=1e-14)


def test_poisson_of_atom() -> None:
    mu = CircleMeasure.preset("dirac(pi)")
    assert poisson_integral(mu, 0.0) == pytest.approx(1.0)
    r = 0.5
    assert poisson_integral(mu, r) == pytest.approx((1.0 - r) / (1.0 + r))
    assert isinstance(poisson_integral(mu, r), float)


def test_poisson_of_sampled_density_matches_constant() -> None:
    sampled = CircleMeasure.from_density(lambda t: np.full(t.shape, 2.0), samples=64)
    assert poisson_integral(sampled, POINTS) == pytest.approx(np.full(POINTS.shape, 2.0), abs=1e-10)


def test_poisson_of_cosine_density() -> None:
    mu = CircleMeasure.from_density(lambda t: 1.0 + np.cos(t), samples=64)
    z = 0.3 + 0.2j
    assert poisson_integral(mu, z) == pytest.approx(1.0 + z.real, abs=1e-10)


def test_poisson_of_peaked_density_uses_closed_form() -> None:
    rho = 0.99
    mu = CircleMeasure.from_density(
        lambda t: (1.0 - rho**2) / (1.0 - 2.0 * rho * np.cos(t) + rho**2), samples=64, breakpoints=(0.0,)
    )
    assert total_mass(mu) == pytest.approx(TWO_PI, rel=1e-9)
    assert 0.0 in mu.singular_angles
    for z in (0.5, 0.3 - 0.4j, 0.95):
        expected = (1.0 - rho**2 * abs(z) ** 2) / abs(1.0 - rho * z) ** 2
        assert poisson_integral(mu, z) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("z", [1.0, 1j, 2.0, complex(math.nan, 0.0)])
def test_poisson_outside_disc(z: complex) -> None:
    with pytest.raises(DomainError):
        poisson_integral(CircleMeasure.lebesgue(), z)


def test_total_mass() -> None:
    assert total_mass(CircleMeasure.lebesgue()) == pytest.approx(TWO_PI)
    assert total_mass(CircleMeasure.zero()) == 0.0
    assert total_mass(CircleMeasure.dirac(1.0, mass=3.0) + CircleMeasure.lebesgue()) == pytest.approx(3.0 + TWO_PI)


@dataclass
class AngleTestCase:
    test_id: str
    text: str
    expected: float


angle_cases = [
    AngleTestCase("plain number", "0.5", 0.5),
    AngleTestCase("pi", "pi", math.pi),
    AngleTestCase("negative half pi", "-pi/2", -0.5 * math.pi),
    AngleTestCase("three quarter pi", "3*pi/4", 0.75 * math.pi),
]


@pytest.mark.parametrize("case", angle_cases, ids=[case.test_id for case in angle_cases])
def test_parse_angle(case: AngleTestCase) -> None:
    assert parse_angle(case.text) == pytest.approx(case.expected)


def test_dirac_angle_is_normalized() -> None:
    mu = CircleMeasure.preset("dirac(-pi/2)")
    assert mu.singular_angles == pytest.approx((1.5 * math.pi,))


@pytest.mark.parametrize("name", ["uniform", "dirac(north)", "dirac()"])
def test_unknown_preset(name: str) -> None:
    with pytest.raises(InvalidMeasureError):
        CircleMeasure.preset(name)


def test_negative_scaling() -> None:
    with pytest.raises(InvalidMeasureError):
        CircleMeasure.lebesgue().scaled(-1.0)


def test_from_dict() -> None:
    mu = CircleMeasure.from_dict(
        {"atoms": [{"angle": "pi", "mass": 1.0}], "density": {"kind": "constant", "value": 0.5}},
        "/measure",
    )
    assert mu.total_mass == pytest.approx(1.0 + 0.5 * TWO_PI)
    assert CircleMeasure.from_dict(mu.to_dict()).total_mass == pytest.approx(mu.total_mass)


@dataclass
class MeasureErrorTestCase:
    test_id: str
    data: object
    pointer: str


measure_error_cases = [
    MeasureErrorTestCase("unknown preset", "uniform", "/measure"),
    MeasureErrorTestCase("wrong type", 3, "/measure"),
    MeasureErrorTestCase("unknown field", {"atom": []}, "/measure/atom"),
    MeasureErrorTestCase("negative mass", {"atoms": [{"angle": 0.0, "mass": -1.0}]}, "/measure/atoms/0"),
    MeasureErrorTestCase("missing mass", {"atoms": [{"angle": 0.0}]}, "/measure/atoms/0/mass"),
    MeasureErrorTestCase("bad density kind", {"density": {"kind": "gaussian"}}, "/measure/density/kind"),
    MeasureErrorTestCase(
        "negative density sample",
        {"density": {"kind": "samples", "samples": [1.0, -1.0]}},
        "/measure/density",
    ),
]


@pytest.mark.parametrize("case", measure_error_cases, ids=[case.test_id for case in measure_error_cases])
def test_from_dict_pointer(case: MeasureErrorTestCase) -> None:
    with pytest.raises(ProblemFileError) as exc_info:
        CircleMeasure.from_dict(case.data, "/measure")
    assert exc_info.value.pointer == case.pointer
