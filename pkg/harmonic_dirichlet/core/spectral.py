from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from harmonic_dirichlet.core.functions.boundary import Function, boundary_values
from harmonic_dirichlet.core.functions.outer import OuterFn
from harmonic_dirichlet.core.measure import CircleMeasure
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.rules import TWO_PI
from harmonic_dirichlet.core.series import taylor_from_boundary

log = logging.getLogger(__name__)

NEGLIGIBLE_FOURIER = 1e-15
"""Fourier modes of a sampled density below this modulus are skipped."""


def grid_boundary_values(f: Function, n: int, spec: QuadratureSpec | None = None) -> np.ndarray:
    """f(e^(2 pi i j/n)) for j = 0..n-1."""
    if isinstance(f, OuterFn) and f.size == n:
        return f.boundary_values()
    t = TWO_PI * np.arange(n) / n
    values = boundary_values(f, t, spec)
    return np.where(np.isfinite(values), values, 0.0)


def taylor_coefficients(f: Function, n: int | None = None, spec: QuadratureSpec | None = None) -> np.ndarray:
    """
    Taylor coefficients a_0..a_(n/2) of f from the FFT of its boundary values on n points.

    Args:
        f       : Function to expand.
        n       : Grid size, `outer_grid` by default.
        spec    : Quadrature specification.
    """
    spec = spec or QuadratureSpec()
    return taylor_from_boundary(grid_boundary_values(f, n or spec.outer_grid, spec))


def local_dirichlet_from_coefficients(coefficients: np.ndarray, zeta: complex) -> float:
    """D_zeta(f) = sum_(k>=0) |sum_(n>k) a_n zeta^n|^2."""
    n = np.arange(coefficients.size)
    terms = coefficients * np.power(complex(zeta), n)
    tails = np.cumsum(terms[::-1])[::-1]
    return float(np.sum(np.abs(tails[1:]) ** 2))


def _weighted_energy(coefficients: np.ndarray) -> float:
    n = np.arange(coefficients.size)
    return float(np.sum(n * np.abs(coefficients) ** 2))


def _density_energy(coefficients: np.ndarray, mu: CircleMeasure) -> float:
    """sum_(n,m>=1) min(n, m) a_n conj(a_m) rho^(m - n) for the absolutely continuous part rho of mu."""
    density = mu.density
    if density.kind == "zero":
        return 0.0
    if density.kind == "constant":
        return density.value * _weighted_energy(coefficients)

    size = coefficients.size
    fourier = density.fourier(np.arange(size))
    total = complex(fourier[0]) * _weighted_energy(coefficients)
    n = np.arange(size)
    for j in range(1, size):
        if abs(fourier[j]) < NEGLIGIBLE_FOURIER:
            continue
        left, right = coefficients[: size - j], coefficients[j:]
        weights = n[: size - j]
        total += 2.0 * complex(fourier[j]) * np.sum(weights * left * np.conj(right))
    return float(total.real)


def spectral_seminorm(coefficients: np.ndarray, mu: CircleMeasure) -> float:
    """
    D_mu seminorm from Taylor coefficients: sum_(n,m>=1) min(n, m) a_n conj(a_m) mu^(m - n).

    Atoms contribute mass/(2 pi) D_zeta(f); the absolutely continuous part goes through its Fourier modes.
    """
    total = _density_energy(coefficients, mu)
    for atom in mu.atoms:
        if atom.mass > 0:
            total += atom.mass / TWO_PI * local_dirichlet_from_coefficients(coefficients, np.exp(1j * atom.angle))
    return total


def spectral_estimate(
    f: Function,
    functional: Callable[[np.ndarray], float],
    spec: QuadratureSpec | None = None,
) -> tuple[float, float]:
    """
    Evaluates a functional of the Taylor coefficients on the `outer_grid` grid and on the grid of half the size;
    the difference is the error estimate.
    """
    spec = spec or QuadratureSpec()
    values = grid_boundary_values(f, spec.outer_grid, spec)
    fine = functional(taylor_from_boundary(values))
    coarse = functional(taylor_from_boundary(values[::2]))
    log.debug("Spectral estimate %.12g (half grid %.12g)", fine, coarse)
    return fine, abs(fine - coarse)
