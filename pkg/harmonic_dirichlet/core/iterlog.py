from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy import integrate, optimize

from harmonic_dirichlet.core.exceptions import DomainError, ValidationError
from harmonic_dirichlet.core.quadrature.options import DEFAULT_SUP_SEARCH_LIMIT

log = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi

SEARCH_GRID_SIZE = 4096
"""Points of the log-spaced grid the M_n search starts from."""

VALIDATION_POINTS = 400
"""Radii 1 - 10^(-8j/399), j = 0..399, on which a computed M table is re-validated."""

BOUND_SLACK = 1e-12

DEFAULT_FIGURE_ORDERS = (2, 3, 4)
DEFAULT_FIGURE_SAMPLES = 10000


def iterate_log(n: int, w: np.ndarray) -> np.ndarray:
    """G_n on an array, without domain checks."""
    w = np.asarray(w, dtype=complex)
    for _ in range(n):
        w = np.log1p(w)
    return w


def iterate_log_derivative(n: int, w: np.ndarray) -> np.ndarray:
    """G_n' = prod_(k<n) 1/(1 + G_k) on an array, without domain checks."""
    current = np.asarray(w, dtype=complex)
    product = np.ones(current.shape, dtype=complex)
    for _ in range(n):
        product = product / (1.0 + current)
        current = np.log1p(current)
    return product


def _check_order(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(value=n, constraint="n is a nonnegative integer")


def _half_plane(z: complex | np.ndarray) -> np.ndarray:
    array = np.asarray(z, dtype=complex)
    bad = ~np.isfinite(array) | (array.real < 0.0)
    if np.any(bad):
        raise DomainError(value=complex(array[bad].flat[0]), constraint="Re z >= 0")
    return array


def _unwrap(values: np.ndarray, scalar: bool) -> Any:
    return values.item() if scalar else values


def G(n: int, z: complex | np.ndarray) -> Any:
    """
    Iterated logarithm G_0(z) = z, G_(n+1)(z) = log(1 + G_n(z)) with principal branches.

    G_n maps the closed right half-plane into itself, so every step stays on the principal branch.

    Args:
        n   : Number of iterations.
        z   : Point or array in the closed right half-plane.

    Raises:
        DomainError: If n < 0 or Re z < 0.
    """
    _check_order(n)
    array = _half_plane(z)
    return _unwrap(iterate_log(n, array), array.ndim == 0)


def G_deriv(n: int, z: complex | np.ndarray) -> Any:
    """
    Derivative of G_n by the product formula prod_(k<n) 1/(1 + G_k(z)). Its modulus is at most 1 on Re z >= 0.

    Raises:
        DomainError: If n < 0 or Re z < 0.
    """
    _check_order(n)
    array = _half_plane(z)
    return _unwrap(iterate_log_derivative(n, array), array.ndim == 0)


def F(n: int, r: float | np.ndarray) -> Any:
    """
    Real majorant F_n(r) = G_n(1/(1 - r)) on [0, 1): positive, increasing in r and decreasing in n.

    Raises:
        DomainError: If r lies outside [0, 1).
    """
    _check_order(n)
    array = np.asarray(r, dtype=float)
    bad = ~np.isfinite(array) | (array < 0.0) | (array >= 1.0)
    if np.any(bad):
        raise DomainError(value=float(array[bad].flat[0]), constraint="0 <= r < 1")

    values = iterate_log(n, 1.0 / (1.0 - array)).real
    return _unwrap(values, array.ndim == 0)


@dataclass(frozen=True)
class IterLogTable:
    """
    Constants M_0..M_(n_max) such that log(1 + pi/2 + M_(n-1) F_(n-1)(r)) <= M_n F_n(r) on [0, 1).

    Attributes:
        n_max           : Largest order computed.
        M0              : Seed M_0.
        M               : M_0..M_(n_max).
        sup_locations   : For n = 1..n_max, the x where the defining supremum was attained.
        search_limit    : Right end of the search interval.
    """

    n_max: int
    M0: float
    M: tuple[float, ...]
    sup_locations: tuple[float, ...]
    search_limit: float = DEFAULT_SUP_SEARCH_LIMIT

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_max": self.n_max,
            "M0": self.M0,
            "M": list(self.M),
            "sup_locations": list(self.sup_locations),
            "search_limit": self.search_limit,
        }


def _sup_ratio(previous: float, lower: float, upper: float) -> tuple[float, float]:
    """sup of log(1 + pi/2 + previous x)/log(1 + x) over [lower, upper], with its location."""

    def ratio(x: Any) -> Any:
        return np.log1p(HALF_PI + previous * x) / np.log1p(x)

    grid = np.geomspace(lower, upper, SEARCH_GRID_SIZE)
    values = ratio(grid)
    best = int(np.argmax(values))
    location, value = float(grid[best]), float(values[best])

    left, right = grid[max(best - 1, 0)], grid[min(best + 1, grid.size - 1)]
    if left < right:
        refined = optimize.minimize_scalar(
            lambda x: -ratio(x),
            bounds=(float(left), float(right)),
            method="bounded",
            options={"xatol": 1e-12 * float(right)},
        )
        candidate = float(ratio(refined.x))
        if candidate > value:
            location, value = float(refined.x), candidate

    return location, value


def validation_radii() -> np.ndarray:
    return 1.0 - 10.0 ** (-8.0 * np.arange(VALIDATION_POINTS) / (VALIDATION_POINTS - 1))


def compute_M(n_max: int, M0: float, search_limit: float = DEFAULT_SUP_SEARCH_LIMIT) -> IterLogTable:
    """
    Computes M_n = sup_(x >= F_n(0)) log(1 + pi/2 + M_(n-1) x)/log(1 + x) for n = 1..n_max.

    The supremum is located on a log-spaced grid over [F_n(0), search_limit] and refined by a bounded scalar
    maximisation around the best grid point. The ratio tends to 1 as x grows, so the search is truncated at
    `search_limit` and M_n is at least 1. The finished table is checked against its defining inequality on
    radii approaching 1.

    Args:
        n_max           : Largest order.
        M0              : Positive seed, 4 f(0) for a Herglotz function f.
        search_limit    : Right end of the search interval.

    Raises:
        DomainError     : If M0 <= 0 or n_max < 0.
        ValidationError : If the inequality fails on the validation radii.
    """
    _check_order(n_max)
    if not math.isfinite(M0) or M0 <= 0.0:
        raise DomainError(value=M0, constraint="M0 > 0")

    constants = [float(M0)]
    locations: list[float] = []
    for n in range(1, n_max + 1):
        lower = float(F(n, 0.0))
        location, value = _sup_ratio(constants[-1], lower, max(search_limit, 2.0 * lower))
        constants.append(max(value, 1.0))
        locations.append(location)
        log.debug("M_%d = %.12g attained at x = %.6g", n, constants[-1], location)

    table = IterLogTable(
        n_max=n_max, M0=float(M0), M=tuple(constants), sup_locations=tuple(locations), search_limit=search_limit
    )
    _validate(table)
    return table


def _validate(table: IterLogTable) -> None:
    radii = validation_radii()
    for n in range(1, table.n_max + 1):
        lhs = np.log1p(HALF_PI + table.M[n - 1] * F(n - 1, radii))
        rhs = table.M[n] * F(n, radii)
        excess = lhs - rhs - BOUND_SLACK * np.maximum(1.0, rhs)
        if np.any(excess > 0.0):
            worst = int(np.argmax(excess))
            raise ValidationError(
                quantity=f"M_{n}",
                detail=f"log(1 + pi/2 + M_{n - 1} F_{n - 1}(r)) exceeds M_{n} F_{n}(r) by {excess[worst]:.3g} "
                f"at r = {radii[worst]!r}",
            )


def step_bound_holds(n: int, z: complex | np.ndarray) -> Any:
    """
    Checks |G_n(z)| <= log(1 + |G_(n-1)(z)|) + pi/2 <= |G_(n-1)(z)| + pi/2 pointwise. Trivially true for n = 0.
    """
    _check_order(n)
    array = _half_plane(z)
    if n == 0:
        return _unwrap(np.ones(array.shape, dtype=bool), array.ndim == 0)

    previous = np.abs(iterate_log(n - 1, array))
    current = np.abs(iterate_log(n, array))
    middle = np.log1p(previous) + HALF_PI
    holds = (current <= middle + BOUND_SLACK) & (middle <= previous + HALF_PI + BOUND_SLACK)
    return _unwrap(holds, array.ndim == 0)


@dataclass(frozen=True)
class CurveRow:
    """One sample of G_n along the imaginary axis."""

    n: int
    t: float
    re: float
    im: float
    abs: float
    step_bound_ok: bool

    def as_csv(self) -> list[Any]:
        return [self.n, repr(self.t), repr(self.re), repr(self.im), repr(self.abs), str(self.step_bound_ok).lower()]


CURVE_HEADER = ("n", "t", "re", "im", "abs", "step_bound_ok")


def figure1_rows(
    ns: Sequence[int] = DEFAULT_FIGURE_ORDERS,
    samples: int = DEFAULT_FIGURE_SAMPLES,
) -> list[CurveRow]:
    """
    Samples the curves t -> G_n(it) on a log-spaced grid 10^-3 <= t <= 10^4.

    Args:
        ns      : Orders to sample.
        samples : Points per curve.
    """
    t = np.logspace(-3.0, 4.0, samples)
    rows: list[CurveRow] = []
    for n in ns:
        values = G(n, 1j * t)
        ok = step_bound_holds(n, 1j * t)
        rows.extend(
            CurveRow(n=n, t=float(ti), re=float(v.real), im=float(v.imag), abs=float(abs(v)), step_bound_ok=bool(o))
            for ti, v, o in zip(t, values, ok)
        )
    return rows


@dataclass(frozen=True)
class ImageArea:
    """
    Area integral of 1/((1+x)^2 + y^2) over the half-strip, computed directly and through its 1-D reduction.
    """

    double: float
    reduction: float

    @property
    def relative_gap(self) -> float:
        return abs(self.double - self.reduction) / abs(self.reduction)

    def to_dict(self) -> dict[str, float]:
        return {"double": self.double, "reduction": self.reduction, "relative_gap": self.relative_gap}


def g2_image_area() -> ImageArea:
    """
    Bounds the area of the image of the right half-plane under G_2.

    The integral of 1/((1+x)^2 + y^2) over x > 0, |y| < pi/2 is computed with a 2-D adaptive rule and compared
    with 2 int_0^(pi/2) arctan(y)/y dy, obtained by integrating out x in closed form.
    """
    double, _ = integrate.nquad(
        lambda y, x: 1.0 / ((1.0 + x) ** 2 + y * y),
        [[-HALF_PI, HALF_PI], [0.0, math.inf]],
        opts={"epsabs": 1e-12, "epsrel": 1e-11, "limit": 200},
    )
    half, _ = integrate.quad(lambda y: math.atan(y) / y, 0.0, HALF_PI, epsabs=1e-14, epsrel=1e-13)
    area = ImageArea(double=float(double), reduction=2.0 * float(half))
    log.debug("G_2 image area %.12g (reduction %.12g)", area.double, area.reduction)
    return area
