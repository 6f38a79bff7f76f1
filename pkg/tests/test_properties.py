from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_dirichlet.core.corpus import HALF_AFFINE, HALF_SHIFTED, HALF_SQRT
from harmonic_dirichlet.core.functions import decode_function, evaluate, outer_min
from harmonic_dirichlet.core.iterlog import F, G, G_deriv, step_bound_holds
from harmonic_dirichlet.core.measure import Atom, CircleMeasure, Density, parse_angle, poisson_integral
from harmonic_dirichlet.core.quadrature import QuadratureSpec

radii = st.floats(min_value=0.0, max_value=0.99)
angles = st.floats(min_value=-math.pi, max_value=math.pi)
masses = st.floats(min_value=0.0, max_value=10.0)
half_plane = st.builds(
    complex,
    st.floats(min_value=0.0, max_value=1e6),
    st.floats(min_value=-1e6, max_value=1e6),
)
measures = st.builds(
    lambda angle, mass, level: CircleMeasure(atoms=(Atom(angle, mass),), density=Density("constant", level)),
    angles,
    masses,
    st.floats(min_value=0.0, max_value=5.0),
)
outer_functions = st.sampled_from(
    [HALF_AFFINE, HALF_SQRT, HALF_SHIFTED, {"kind": "power", "scale": 0.8, "lambda": 0.5, "alpha": 1.5}]
)

OUTER_SPEC = QuadratureSpec(outer_grid=1024)
CIRCLE_NODES = 128


def _point(r: float, t: float) -> complex:
    return r * complex(math.cos(t), math.sin(t))


@given(radii, angles, angles)
def test_poisson_of_atom_is_bounded_by_harnack(r: float, t: float, atom: float) -> None:
    mu = CircleMeasure.dirac(atom, mass=2.0 * math.pi)
    value = poisson_integral(mu, _point(r, t))
    assert (1.0 - r) / (1.0 + r) * (1.0 - 1e-9) <= value <= (1.0 + r) / (1.0 - r) * (1.0 + 1e-9)


@given(measures, measures, masses, masses, radii, angles)
def test_poisson_is_linear_in_the_measure(
    first: CircleMeasure, second: CircleMeasure, a: float, b: float, r: float, t: float
) -> None:
    z = _point(r, t)
    combined = poisson_integral(first.scaled(a) + second.scaled(b), z)
    expected = a * poisson_integral(first, z) + b * poisson_integral(second, z)
    assert combined == pytest.approx(expected, rel=1e-9, abs=1e-12)


@given(measures)
def test_poisson_at_origin_is_mean_mass(mu: CircleMeasure) -> None:
    assert poisson_integral(mu, 0.0) == pytest.approx(mu.total_mass / (2.0 * math.pi), rel=1e-12, abs=1e-14)


@given(measures, st.floats(min_value=0.0, max_value=0.5), angles, st.floats(min_value=0.01, max_value=0.3))
def test_poisson_has_the_mean_value_property(mu: CircleMeasure, r: float, t: float, rho: float) -> None:
    centre = _point(r, t)
    circle = centre + rho * np.exp(2j * math.pi * np.arange(CIRCLE_NODES) / CIRCLE_NODES)
    mean = float(np.mean(poisson_integral(mu, circle)))
    assert mean == pytest.approx(poisson_integral(mu, centre), rel=1e-9, abs=1e-12)


@settings(max_examples=6, deadline=None)
@given(outer_functions, outer_functions)
def test_outer_min_is_commutative(left: dict, right: dict) -> None:
    f, g = decode_function(left), decode_function(right)
    forward = outer_min(f, g, OUTER_SPEC)
    backward = outer_min(g, f, OUTER_SPEC)
    assert np.array_equal(forward.log_modulus, backward.log_modulus)
    assert forward.singular_angles == backward.singular_angles


@settings(max_examples=4, deadline=None)
@given(outer_functions)
def test_outer_min_is_idempotent(data: dict) -> None:
    f = decode_function(data)
    z = np.concatenate(([0.0, 0.5], 0.9 * np.exp(2j * math.pi * np.arange(7) / 7)))
    assert evaluate(outer_min(f, f, OUTER_SPEC), z) == pytest.approx(evaluate(f, z), abs=1e-6)


@given(st.integers(min_value=0, max_value=6), half_plane)
def test_iterated_log_stays_in_half_plane(n: int, w: complex) -> None:
    assert G(n, w).real >= 0.0
    assert abs(G_deriv(n, w)) <= 1.0 + 1e-12
    assert step_bound_holds(n, w)


@given(st.integers(min_value=0, max_value=5), radii)
def test_majorant_decreases_in_order(n: int, r: float) -> None:
    assert F(n + 1, r) <= F(n, r)
    assert F(n, r) > 0.0


@given(st.floats(min_value=-100.0, max_value=100.0, allow_nan=False))
def test_parse_angle_of_number(value: float) -> None:
    assert parse_angle(repr(value)) == value
