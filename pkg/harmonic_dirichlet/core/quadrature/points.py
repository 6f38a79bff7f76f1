from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from typing_extensions import TypeAlias


@dataclass(frozen=True)
class DiscPoints:
    """
    Polar sample points of the open unit disc.

    The radial coordinate is stored as its distance to the boundary so that 1 - |z|^2 stays accurate when
    |z| is within rounding of 1.

    Attributes:
        d       : 1 - |z|, in (0, 1].
        theta   : Angles in radians, broadcastable against `d`.
    """

    d: np.ndarray
    theta: np.ndarray

    @classmethod
    def from_complex(cls, z: np.ndarray | complex) -> DiscPoints:
        z = np.asarray(z, dtype=complex)
        return cls(1.0 - np.abs(z), np.angle(z))

    @property
    def r(self) -> np.ndarray:
        return 1.0 - self.d

    @property
    def z(self) -> np.ndarray:
        return self.r * np.exp(1j * self.theta)

    @property
    def one_minus_modulus_sq(self) -> np.ndarray:
        """1 - |z|^2 computed as d(2 - d)."""
        return self.d * (2.0 - self.d)

    def poisson_kernel(self, angle: float) -> np.ndarray:
        """
        Poisson kernel (1 - |z|^2)/|1 - z e^(-i angle)|^2 at the points.

        Args:
            angle: Boundary angle of the kernel's pole.
        """
        r = self.r
        half = np.sin(0.5 * (self.theta - angle))
        return self.one_minus_modulus_sq / (self.d * self.d + 4.0 * r * half * half)


DiscIntegrand: TypeAlias = Callable[[DiscPoints], np.ndarray]
"""Real-valued integrand evaluated on a batch of disc points."""

CircleIntegrand: TypeAlias = Callable[[np.ndarray], np.ndarray]
"""Real-valued integrand evaluated on an array of angles."""
