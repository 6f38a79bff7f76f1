from __future__ import annotations

import math

import numpy as np
import pytest

from harmonic_dirichlet.core.corpus import HALF_AFFINE, HALF_SQRT
from harmonic_dirichlet.core.exceptions import InvalidSamplesError, NotOuterError
from harmonic_dirichlet.core.functions import (
    OuterFn,
    decode_function,
    deriv,
    evaluate,
    identity,
    is_outer,
    outer_from_log_modulus,
    outer_min,
    radial_limit,
    sup_norm_estimate,
)
from harmonic_dirichlet.core.quadrature.rules import TWO_PI

GRID = 64


def _grid(n: int = GRID) -> np.ndarray:
    return TWO_PI * np.arange(n) / n


def test_outer_from_cosine_is_exponential() -> None:
    outer = outer_from_log_modulus(np.cos(_grid()))
    z = np.array([0.0, 0.3, -0.5 + 0.2j])
    assert evaluate(outer, z) == pytest.approx(np.exp(z), rel=1e-12)
    assert deriv(outer, z) == pytest.approx(np.exp(z), rel=1e-10)
    assert outer.value_at_zero == pytest.approx(1.0)
    assert outer.zeros == ()


def test_outer_with_boundary_zero() -> None:
    with np.errstate(divide="ignore"):
        samples = np.log(np.abs(1.0 - np.exp(1j * _grid())))
    assert samples[0] == -math.inf

    outer = outer_from_log_modulus(samples)
    assert outer.singular_angles == (0.0,)
    assert outer.zeros[0].strength == pytest.approx(1.0, rel=1e-9)
    assert evaluate(outer, 0.3) == pytest.approx(0.7, rel=1e-9)


def test_outer_with_boundary_zero_between_nodes() -> None:
    angle = 0.5 * TWO_PI / GRID
    samples = np.log(np.abs(1.0 - np.exp(1j * (_grid() - angle)))) - math.log(2.0)
    assert np.all(np.isfinite(samples))

    outer = outer_from_log_modulus(samples)
    assert outer.singular_angles == pytest.approx((angle,), abs=1e-7)
    assert outer.zeros[0].strength == pytest.approx(1.0, rel=1e-6)

    z = np.array([0.0, 0.5, -0.5 + 0.3j, 0.9j])
    assert evaluate(outer, z) == pytest.approx(0.5 * (1.0 - z * np.exp(-1j * angle)), abs=1e-6)


@pytest.mark.parametrize(
    "samples",
    [
        [0.0] * 10,
        [0.0] * 8,
        [math.nan] + [0.0] * 63,
        [math.inf] + [0.0] * 63,
        [-math.inf] * 64,
        [-math.inf, -math.inf] + [0.0] * 62,
    ],
    ids=["not a power of two", "too small", "nan", "plus infinity", "all minus infinity", "adjacent zeros"],
)
def test_invalid_samples(samples: list[float]) -> None:
    with pytest.raises(InvalidSamplesError):
        outer_from_log_modulus(samples)


def test_is_outer() -> None:
    assert is_outer(decode_function(HALF_AFFINE)).is_outer
    assert is_outer(decode_function(HALF_SQRT)).is_outer
    assert is_outer(outer_from_log_modulus(np.cos(_grid()))).is_outer

    check = is_outer(identity())
    assert not check.is_outer
    assert check.reason == "f vanishes at 0"


def test_inner_factor_is_not_outer() -> None:
    # Blaschke factor: |f| = 1 on the circle, f(0) = 1/2
    f = (identity() + 0.5) / (1 + 0.5 * identity())
    check = is_outer(f)
    assert not check.is_outer
    assert check.gap == pytest.approx(math.log(2.0), rel=1e-6)


def test_sup_norm_estimate() -> None:
    estimate = sup_norm_estimate(decode_function(HALF_AFFINE))
    assert 0.999 < estimate.value <= 1.0
    assert estimate.angle == pytest.approx(math.pi, abs=1e-2)


def test_radial_limit() -> None:
    limit = radial_limit(decode_function(HALF_AFFINE), -1.0)
    assert limit.available
    assert limit.value == pytest.approx(1.0, abs=1e-9)


def test_outer_min() -> None:
    h = decode_function(HALF_AFFINE)
    cutoff = outer_min(h, 2.0 * h * h)
    assert isinstance(cutoff, OuterFn)
    assert cutoff.value_at_zero <= 0.5 + 1e-9
    assert cutoff.sup_norm <= 1.0 + 1e-9


def test_outer_min_rejects_non_outer() -> None:
    with pytest.raises(NotOuterError):
        outer_min(identity(), decode_function(HALF_AFFINE))
