from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np
from scipy import optimize

from harmonic_dirichlet.core.exceptions import InvalidSamplesError
from harmonic_dirichlet.core.functions.expression import AnalyticFn, OuterLeaf, evaluate
from harmonic_dirichlet.core.quadrature.rules import TWO_PI, normalize_angles
from harmonic_dirichlet.core.series import analytic_coefficients, evaluate_series, evaluate_series_derivative

log = logging.getLogger(__name__)

FIT_NEIGHBOURS = 3
"""Symmetric neighbours on each side used to fit the strength of a boundary zero."""

STRENGTH_FLOOR = 1e-8
"""Fitted strengths below this are treated as no zero at all."""

MIN_GRID = 16

DIP_SHARPNESS = 0.05
"""Second difference of the log-modulus above which a local minimum is fitted as a boundary zero between nodes."""

DIP_NEIGHBOURS = 4
"""Nodes on each side of a sharp local minimum used in that fit."""

DIP_FIT_GAIN = 100.0
"""A fitted zero is kept when its residual is this many times smaller than that of a plain cubic."""

LogModulusFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LogZero:
    """Boundary zero of an outer function: near `angle` the log-modulus behaves like strength * log|t - angle|."""

    angle: float
    strength: float


def _check_grid_size(n: int) -> None:
    if n < MIN_GRID or n & (n - 1):
        raise InvalidSamplesError(reason=f"grid size {n} is not a power of two >= {MIN_GRID}")


def _singular_log(t: np.ndarray, angle: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(2.0 * np.sin(0.5 * (t - angle))))


def _fit_zero(neighbours: np.ndarray, step: float) -> tuple[float, float]:
    """
    Fits strength * log|2 sin(kh/2)| + smooth + c k^2 to the symmetric means of the neighbours k = 1..3.

    Returns:
        The strength and the smooth part's value at the zero.
    """
    k = np.arange(1, FIT_NEIGHBOURS + 1, dtype=float)
    design = np.column_stack((np.log(2.0 * np.sin(0.5 * k * step)), np.ones_like(k), k * k))
    strength, smooth, _ = np.linalg.solve(design, neighbours)
    return float(strength), float(smooth)


def _dip_residual(design: np.ndarray, window: np.ndarray) -> tuple[np.ndarray, float]:
    coefficients, *_ = np.linalg.lstsq(design, window, rcond=None)
    return coefficients, float(np.linalg.norm(design @ coefficients - window))


def _dip_design(s: np.ndarray, offset: float) -> np.ndarray:
    x = s - offset
    with np.errstate(divide="ignore"):
        singular = np.log(np.abs(2.0 * np.sin(0.5 * x)))
    return np.column_stack((singular, np.ones_like(x), x, x * x))


def _fit_dip(window: np.ndarray, step: float) -> tuple[float, float, float] | None:
    """
    Fits strength * log|2 sin((t - angle)/2)| + quadratic to samples centred on a local minimum, with the
    angle searched between the two neighbouring nodes.

    Returns:
        The angle offset from the centre node, the strength and the smooth part's value at the zero, or None
        when a cubic without a logarithm explains the window about as well.
    """
    s = step * np.arange(-DIP_NEIGHBOURS, DIP_NEIGHBOURS + 1, dtype=float)

    def residual(offset: float) -> float:
        design = _dip_design(s, offset)
        if not np.all(np.isfinite(design)):
            return math.inf
        return _dip_residual(design, window)[1]

    search = optimize.minimize_scalar(residual, bounds=(-step, step), method="bounded", options={"xatol": 1e-14})
    if not math.isfinite(search.fun):
        return None
    offset = float(search.x)
    (strength, smooth, *_), singular_residual = _dip_residual(_dip_design(s, offset), window)
    _, polynomial_residual = _dip_residual(np.vander(s, 4, increasing=True), window)
    if strength <= STRENGTH_FLOOR or singular_residual * DIP_FIT_GAIN >= polynomial_residual:
        return None
    return offset, float(strength), float(smooth)


def _off_grid_zeros(u: np.ndarray) -> list[tuple[float, float, float]]:
    """Boundary zeros between sample nodes, found at sharp local minima of the log-modulus."""
    n = u.size
    step = TWO_PI / n
    left, right = np.roll(u, 1), np.roll(u, -1)
    with np.errstate(invalid="ignore"):
        sharp = (u <= left) & (u < right) & (left - 2.0 * u + right > DIP_SHARPNESS)

    fits: list[tuple[float, float, float]] = []
    for j in np.flatnonzero(sharp):
        window = u[(j + np.arange(-DIP_NEIGHBOURS, DIP_NEIGHBOURS + 1)) % n]
        if not np.all(np.isfinite(window)):
            continue
        fit = _fit_dip(window, step)
        if fit is None:
            log.warning("Sharp dip of the log-modulus at t = %.6f is not resolved as a boundary zero", j * step)
            continue
        offset, strength, smooth = fit
        fits.append((float((j * step + offset) % TWO_PI), strength, smooth))
    return fits


@dataclass(frozen=True, eq=False)
class OuterFn:
    """
    Outer function determined by its boundary log-modulus.

    The log-modulus u is sampled on t_j = 2 pi j/N. Logarithmic boundary zeros are split off in closed form, and
    the remainder v is smooth enough for the discrete Herglotz transform:

        log O(z) = sum_s beta_s log(1 - z e^(-i theta_s)) + c_0 + 2 sum_k c_k z^k,

    with c_k the discrete Fourier coefficients of v. O(0) = exp(c_0) is the exponential of the boundary mean.

    Attributes:
        log_modulus     : The samples of u; -inf marks a boundary zero on a node. Sharp dips between nodes are
                          fitted as zeros off the grid.
        zeros           : Boundary zeros with their strengths.
        coefficients    : Taylor coefficients of the smooth part of log O.
    """

    log_modulus: np.ndarray
    zeros: tuple[LogZero, ...] = ()
    coefficients: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))

    @classmethod
    def from_log_modulus(cls, samples: Iterable[float]) -> OuterFn:
        """
        Builds the outer function whose boundary log-modulus interpolates the samples.

        Logarithmic zeros on a node show up as -inf samples. Zeros between nodes are looked for at local minima
        whose second difference exceeds `DIP_SHARPNESS`; a dip that does not fit a logarithmic zero is logged and
        left in the smooth part.

        Raises:
            InvalidSamplesError: On NaN or +inf samples, a grid size that is not a power of two, samples that are
                all -inf or a -inf sample without three finite neighbours on each side.
        """
        u = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float).ravel()
        _check_grid_size(u.size)
        if np.any(np.isnan(u)) or np.any(u == math.inf):
            raise InvalidSamplesError(reason="samples must be finite or -inf")
        if np.all(u == -math.inf):
            raise InvalidSamplesError(reason="log-modulus has no finite sample")

        n = u.size
        step = TWO_PI / n
        fits: list[tuple[float, float, float]] = []
        for j in np.flatnonzero(u == -math.inf):
            k = np.arange(1, FIT_NEIGHBOURS + 1)
            right, left = u[(j + k) % n], u[(j - k) % n]
            if not (np.all(np.isfinite(right)) and np.all(np.isfinite(left))):
                raise InvalidSamplesError(reason=f"boundary zero at sample {j} has non-finite neighbours")
            strength, smooth = _fit_zero(0.5 * (right + left), step)
            fits.append((j * step, strength, smooth))

        fits.extend(_off_grid_zeros(u))
        return cls._assemble(u, fits)

    @classmethod
    def from_boundary(cls, log_modulus: LogModulusFn, singular_angles: Iterable[float], n: int) -> OuterFn:
        """
        Builds an outer function from a callable boundary log-modulus.

        The callable is sampled on t_j = 2 pi j/N. At each declared singular angle the strength of a possible
        logarithmic zero is fitted from evaluations at the angle plus and minus k 2pi/N; angles where it is
        negligible are treated as regular points.

        Args:
            log_modulus     : Vectorised t -> log|f(e^(it))|.
            singular_angles : Angles where the log-modulus may be singular.
            n               : Grid size, a power of two.
        """
        _check_grid_size(n)
        step = TWO_PI / n
        t = step * np.arange(n)
        with np.errstate(all="ignore"):
            u = np.asarray(log_modulus(t), dtype=float).copy()

        fits: list[tuple[float, float, float]] = []
        k = np.arange(1, FIT_NEIGHBOURS + 1) * step
        for angle in normalize_angles(singular_angles):
            with np.errstate(all="ignore"):
                means = 0.5 * (np.asarray(log_modulus(angle + k)) + np.asarray(log_modulus(angle - k)))
            if not np.all(np.isfinite(means)):
                raise InvalidSamplesError(reason=f"log-modulus is not finite next to the singular angle {angle!r}")
            strength, smooth = _fit_zero(means, step)
            fits.append((angle, strength, smooth))
            nearest = int(round(angle / step)) % n
            if abs(angle - nearest * step) < 1e-12 or abs(angle - nearest * step - TWO_PI) < 1e-12:
                u[nearest] = -math.inf if strength > STRENGTH_FLOOR else smooth

        if not np.all(np.isfinite(u) | (u == -math.inf)):
            bad = int(np.argmin(np.isfinite(u) | (u == -math.inf)))
            raise InvalidSamplesError(reason=f"log-modulus is not finite at t = {t[bad]!r}")
        return cls._assemble(u, fits)

    @classmethod
    def _assemble(cls, u: np.ndarray, fits: list[tuple[float, float, float]]) -> OuterFn:
        n = u.size
        step = TWO_PI / n
        t = step * np.arange(n)
        zeros = tuple(LogZero(angle, strength) for angle, strength, _ in fits if abs(strength) > STRENGTH_FLOOR)

        singular = np.zeros(n)
        for zero in zeros:
            singular += zero.strength * _singular_log(t, zero.angle)

        with np.errstate(invalid="ignore"):
            smooth = u - singular
        for angle, _, value in fits:
            nearest = int(round(angle / step)) % n
            if abs(angle - nearest * step) >= 1e-12 and abs(angle - nearest * step - TWO_PI) >= 1e-12:
                continue
            others = sum(z.strength * float(_singular_log(np.array(angle), z.angle)) for z in zeros if z.angle != angle)
            smooth[nearest] = value - others

        if not np.all(np.isfinite(smooth)):
            bad = int(np.argmin(np.isfinite(smooth)))
            raise InvalidSamplesError(reason=f"log-modulus is -inf at t = {t[bad]!r} without a fitted zero")

        for zero in zeros:
            log.debug("Boundary zero at %.6f with strength %.9f", zero.angle, zero.strength)
        return cls(log_modulus=u, zeros=zeros, coefficients=analytic_coefficients(smooth))

    @property
    def size(self) -> int:
        return int(self.log_modulus.size)

    @property
    def grid(self) -> np.ndarray:
        return (TWO_PI / self.size) * np.arange(self.size)

    @property
    def singular_angles(self) -> tuple[float, ...]:
        return tuple(zero.angle for zero in self.zeros)

    @property
    def value_at_zero(self) -> float:
        """O(0) = exp(mean of the boundary log-modulus), positive."""
        return math.exp(float(self.coefficients[0].real))

    @property
    def sup_norm(self) -> float:
        """exp of the largest sample: the sup of |O| on the disc up to the sampling resolution."""
        return math.exp(float(np.max(self.log_modulus)))

    def log_value(self, z: np.ndarray) -> np.ndarray:
        """log O(z) on the closed disc (no domain check)."""
        z = np.asarray(z, dtype=complex)
        result = evaluate_series(self.coefficients, z)
        with np.errstate(divide="ignore"):
            for zero in self.zeros:
                result = result + zero.strength * np.log(1.0 - z * np.exp(-1j * zero.angle))
        return result

    def values(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return np.exp(self.log_value(z))

    def derivative_values(self, z: np.ndarray) -> np.ndarray:
        """O'(z) = O(z) (log O)'(z)."""
        z = np.asarray(z, dtype=complex)
        slope = evaluate_series_derivative(self.coefficients, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            for zero in self.zeros:
                rotation = np.exp(-1j * zero.angle)
                slope = slope - zero.strength * rotation / (1.0 - z * rotation)
            return self.values(z) * slope

    def boundary_log_modulus(self, t: np.ndarray) -> np.ndarray:
        """u(t) = sum_s beta_s log|2 sin((t - theta_s)/2)| + Re of the smooth series on the circle."""
        t = np.asarray(t, dtype=float)
        result = evaluate_series(self.coefficients, np.exp(1j * t)).real
        for zero in self.zeros:
            result = result + zero.strength * _singular_log(t, zero.angle)
        return np.asarray(result)

    def boundary_values(self) -> np.ndarray:
        """O(e^(it_j)) on the sampling grid, 0 at boundary zeros."""
        return self.values(np.exp(1j * self.grid))

    def as_function(self) -> AnalyticFn:
        return OuterLeaf(self)

    def __call__(self, z: Any) -> Any:
        return evaluate(self, z)

    def __mul__(self, other: Any) -> AnalyticFn:
        return self.as_function() * other

    def __rmul__(self, other: Any) -> AnalyticFn:
        return other * self.as_function()

    def __add__(self, other: Any) -> AnalyticFn:
        return self.as_function() + other

    def __radd__(self, other: Any) -> AnalyticFn:
        return other + self.as_function()


def outer_from_log_modulus(samples: Iterable[float]) -> OuterFn:
    """
    Outer function with boundary log-modulus `samples` on a uniform grid of power-of-two size.

    Raises:
        InvalidSamplesError: If the samples cannot be used.
    """
    return OuterFn.from_log_modulus(samples)
