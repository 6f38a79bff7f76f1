from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import pytest

from harmonic_dirichlet.core.exceptions import DomainError
from harmonic_dirichlet.core.iterlog import (
    CURVE_HEADER,
    DEFAULT_FIGURE_ORDERS,
    F,
    G,
    G_deriv,
    compute_M,
    figure1_rows,
    g2_image_area,
    step_bound_holds,
)


def test_g_zero_is_identity() -> None:
    assert G(0, 2.0 + 1.0j) == 2.0 + 1.0j
    assert G_deriv(0, 2.0 + 1.0j) == 1.0


def test_g_iterates_principal_log() -> None:
    z = 1.0 + 2.0j
    assert G(1, z) == pytest.approx(np.log(2.0 + 2.0j))
    assert G(2, z) == pytest.approx(np.log(1.0 + np.log(2.0 + 2.0j)))
    assert G_deriv(2, z) == pytest.approx(1.0 / ((1.0 + z) * (1.0 + np.log(1.0 + z))))


def test_g_on_arrays() -> None:
    t = np.array([0.0, 1.0, 100.0])
    values = G(3, 1j * t)
    assert values.shape == (3,)
    assert values[0] == 0.0
    assert np.all(values.real >= 0.0)


def test_f_majorant() -> None:
    assert F(0, 0.5) == pytest.approx(2.0)
    assert F(1, 0.0) == pytest.approx(math.log(2.0))
    r = np.linspace(0.0, 0.999, 50)
    assert np.all(np.diff(F(2, r)) > 0.0)
    assert np.all(F(3, r) < F(2, r))


@dataclass
class DomainTestCase:
    test_id: str
    call: Any


domain_cases = [
    DomainTestCase("negative order", lambda: G(-1, 1.0)),
    DomainTestCase("boolean order", lambda: G(True, 1.0)),
    DomainTestCase("left half plane", lambda: G(1, -0.5 + 1.0j)),
    DomainTestCase("derivative left half plane", lambda: G_deriv(2, -1e-3)),
    DomainTestCase("radius one", lambda: F(1, 1.0)),
    DomainTestCase("negative radius", lambda: F(1, -0.1)),
    DomainTestCase("seed not positive", lambda: compute_M(2, 0.0)),
    DomainTestCase("step bound left half plane", lambda: step_bound_holds(1, -2.0)),
]


@pytest.mark.parametrize("case", domain_cases, ids=[case.test_id for case in domain_cases])
def test_domain_errors(case: DomainTestCase) -> None:
    with pytest.raises(DomainError):
        case.call()


def test_compute_m() -> None:
    table = compute_M(4, 4.0)
    assert table.M[0] == 4.0
    assert table.M[1] == pytest.approx(math.log1p(0.5 * math.pi + 4.0 * math.log(2.0)) / math.log1p(math.log(2.0)))
    assert table.sup_locations[0] == pytest.approx(math.log(2.0), rel=1e-6)
    assert len(table.M) == 5
    assert all(m >= 1.0 for m in table.M)
    assert table.to_dict()["n_max"] == 4


def test_step_bound_holds() -> None:
    w = np.array([0.0, 1.0, 1j, 1e6 - 1e6j, 3.0 + 0.5j])
    for n in range(5):
        assert np.all(step_bound_holds(n, w))
    assert step_bound_holds(0, 1.0) is True


def test_figure1_rows() -> None:
    rows = figure1_rows(samples=5)
    assert len(rows) == 5 * len(DEFAULT_FIGURE_ORDERS)
    assert [row.n for row in rows[:5]] == [2] * 5
    assert rows[0].t == pytest.approx(1e-3)
    assert rows[4].t == pytest.approx(1e4)
    assert all(row.step_bound_ok for row in rows)
    assert all(row.re >= 0.0 for row in rows)

    csv_row = rows[0].as_csv()
    assert len(csv_row) == len(CURVE_HEADER)
    assert csv_row[-1] == "true"


def test_g2_image_area() -> None:
    area = g2_image_area()
    assert area.reduction == pytest.approx(2.6416, abs=1e-3)
    assert area.relative_gap < 1e-8
    assert set(area.to_dict()) == {"double", "reduction", "relative_gap"}
