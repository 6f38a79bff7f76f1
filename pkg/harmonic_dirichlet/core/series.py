from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import polynomial

SERIES_EPS = 1e-17
"""Terms of a power series below this relative size are dropped."""


def truncation_order(size: int, radius: float, eps: float = SERIES_EPS) -> int:
    """Number of leading terms of a bounded-coefficient series needed on |z| <= radius."""
    if radius <= 0.0:
        return 1
    if radius >= 1.0:
        return size
    return min(size, int(math.ceil(math.log(eps) / math.log(radius))) + 1)


def evaluate_series(coefficients: np.ndarray, z: np.ndarray, eps: float = SERIES_EPS) -> np.ndarray:
    """
    Evaluates sum_k a_k z^k by Horner's rule, truncated where the remaining terms are below `eps`.

    Args:
        coefficients    : Taylor coefficients a_0, a_1, ...
        z               : Evaluation points with |z| <= 1.
    """
    z = np.asarray(z, dtype=complex)
    if z.size == 0:
        return np.zeros(z.shape, dtype=complex)

    order = truncation_order(len(coefficients), float(np.max(np.abs(z))), eps)
    return np.asarray(polynomial.polyval(z, coefficients[:order]), dtype=complex)


def evaluate_series_derivative(coefficients: np.ndarray, z: np.ndarray, eps: float = SERIES_EPS) -> np.ndarray:
    """Evaluates sum_k k a_k z^(k-1)."""
    if len(coefficients) < 2:
        return np.zeros(np.shape(z), dtype=complex)
    return evaluate_series(polynomial.polyder(coefficients), z, eps)


def analytic_coefficients(samples: np.ndarray) -> np.ndarray:
    """
    Taylor coefficients of the analytic function whose real part on the circle interpolates `samples`.

    The samples live on t_j = 2 pi j/N. The result is c_0, 2c_1, ..., 2c_(N/2-1), c_(N/2) with c_k the discrete
    Fourier coefficients, so that Re sum_k a_k e^(ik t_j) reproduces the samples and the imaginary part
    vanishes at 0.
    """
    n = len(samples)
    c = np.fft.rfft(np.asarray(samples, dtype=float)) / n
    coefficients = 2.0 * c
    coefficients[0] = c[0].real
    if n % 2 == 0:
        coefficients[-1] = c[-1].real
    return coefficients


def taylor_from_boundary(values: np.ndarray) -> np.ndarray:
    """
    Taylor coefficients a_0..a_(N/2) of an analytic function from its boundary values on t_j = 2 pi j/N.

    Negative frequencies, which vanish for boundary values of H^2 functions, are discarded.
    """
    n = len(values)
    return np.fft.fft(np.asarray(values, dtype=complex))[: n // 2 + 1] / n
