"""
Finite positive Borel measures on the unit circle and their Poisson integrals.

Masses follow the arc-length convention: the Lebesgue preset has total mass 2 pi and the Poisson integral
P_mu(z) = int (1 - |z|^2)/|1 - conj(w) z|^2 dmu(w)/(2 pi), so P_mu = 1 for it.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Literal, Mapping, Sequence

import numpy as np
from scipy import integrate
from typing_extensions import TypeAlias

from harmonic_dirichlet.core.exceptions import DomainError, InvalidMeasureError, ProblemFileError
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.quadrature.points import DiscPoints
from harmonic_dirichlet.core.quadrature.rules import TWO_PI
from harmonic_dirichlet.core.series import evaluate_series

log = logging.getLogger(__name__)

DensityKind: TypeAlias = Literal["zero", "constant", "samples"]
"""Supported representations of the absolutely continuous part."""

MassConvention: TypeAlias = Literal["arc-length"]

DensityFn: TypeAlias = Callable[[np.ndarray], np.ndarray]

QUAD_LIMIT = 200
"""Subinterval limit of the adaptive quadrature applied to closed-form densities."""

_DIRAC_PATTERN = re.compile(r"^dirac\((?P<angle>[^)]*)\)$")
_PI_PATTERN = re.compile(r"^(?P<num>[+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$")


def _closed_form(function: DensityFn) -> Callable[[float], float]:
    def value(t: float) -> float:
        return float(np.asarray(function(np.array([t])), dtype=float).ravel()[0])

    return value


def _sum_forms(first: DensityFn | None, second: DensityFn | None) -> DensityFn | None:
    if first is None or second is None:
        return None
    left, right = first, second
    return lambda t: np.asarray(left(t), dtype=float) + np.asarray(right(t), dtype=float)


def _scaled_form(function: DensityFn | None, factor: float) -> DensityFn | None:
    if function is None:
        return None
    form = function
    return lambda t: factor * np.asarray(form(t), dtype=float)


def _window_integral(integrand: Callable[[float], float], centre: float, breakpoints: Sequence[float]) -> float:
    """Integral over one period [centre - pi, centre + pi], split at the breakpoints."""
    points = sorted({centre + math.remainder(a - centre, TWO_PI) for a in (centre, *breakpoints)})
    inside = [p for p in points if abs(p - centre) < math.pi]
    value, _ = integrate.quad(
        integrand,
        centre - math.pi,
        centre + math.pi,
        points=inside or None,
        limit=QUAD_LIMIT,
        epsabs=1e-14,
        epsrel=1e-13,
    )
    return float(value)


def _closed_form_poisson(function: DensityFn, breakpoints: Sequence[float], w: complex) -> float:
    density = _closed_form(function)
    rho, phi = abs(w), math.atan2(w.imag, w.real)

    def integrand(t: float) -> float:
        return (1.0 - rho * rho) / (1.0 - 2.0 * rho * math.cos(t - phi) + rho * rho) * density(t)

    return _window_integral(integrand, phi, breakpoints) / TWO_PI


def _normalize_angle(angle: float) -> float:
    a = math.fmod(angle, TWO_PI)
    if a < 0:
        a += TWO_PI
    return 0.0 if a >= TWO_PI else a


def parse_angle(text: str) -> float:
    """
    Parses an angle written as a number or as a rational multiple of pi ("pi", "-pi/2", "3*pi/4").

    Raises:
        ValueError: If the text is neither.
    """
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass

    match = _PI_PATTERN.match(text)
    if not match:
        raise ValueError(f"cannot parse angle {text!r}")

    num = match.group("num")
    factor = 1.0 if num in ("", "+") else -1.0 if num == "-" else float(num)
    den = float(match.group("den")) if match.group("den") else 1.0
    return factor * math.pi / den


@dataclass(frozen=True)
class Atom:
    """A point mass `mass` at boundary angle `angle`."""

    angle: float
    mass: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.angle) and math.isfinite(self.mass)):
            raise InvalidMeasureError(reason=f"atom ({self.angle!r}, {self.mass!r}) is not finite")
        if self.mass < 0:
            raise InvalidMeasureError(reason=f"atom at {self.angle!r} has negative mass {self.mass!r}")
        object.__setattr__(self, "angle", _normalize_angle(self.angle))


@dataclass(frozen=True)
class Density:
    """
    Absolutely continuous part of a circle measure, dmu = density(t) dt.

    Attributes:
        kind        : "zero", "constant" or "samples".
        value       : The constant, for kind "constant".
        samples     : Density values on the uniform grid t_j = 2 pi j/N, for kind "samples".
        function    : Closed form the samples were taken from, when known. The mass and the Poisson integrals
                      at given points then come from adaptive quadrature of it; disc integrals keep using the
                      samples.
        breakpoints : Angles where the closed form has sharp features.
    """

    kind: DensityKind = "zero"
    value: float = 0.0
    samples: tuple[float, ...] = ()
    function: DensityFn | None = field(default=None, compare=False, repr=False)
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "constant":
            if not math.isfinite(self.value) or self.value < 0:
                raise InvalidMeasureError(reason=f"constant density {self.value!r} is not a nonnegative number")
        elif self.kind == "samples":
            values = np.asarray(self.samples, dtype=float)
            if values.size == 0:
                raise InvalidMeasureError(reason="sampled density has no samples")
            if not np.all(np.isfinite(values)) or np.any(values < 0):
                raise InvalidMeasureError(reason="density samples must be finite and nonnegative")
        elif self.kind != "zero":
            raise InvalidMeasureError(reason=f"unknown density kind {self.kind!r}")

    @cached_property
    def _coefficients(self) -> np.ndarray:
        """Fourier coefficients c_k = (1/N) sum_j rho_j e^(-ik t_j), k = 0..N/2."""
        values = np.asarray(self.samples, dtype=float)
        return np.fft.rfft(values) / values.size

    @property
    def mass(self) -> float:
        if self.kind == "constant":
            return TWO_PI * self.value
        if self.kind == "samples":
            if self.function is not None:
                return self._closed_form_mass
            return TWO_PI * float(self._coefficients[0].real)
        return 0.0

    @cached_property
    def _closed_form_mass(self) -> float:
        if self.function is None:
            return 0.0
        density = _closed_form(self.function)
        centre = self.breakpoints[0] if self.breakpoints else math.pi
        return _window_integral(density, centre, self.breakpoints)

    def closed_form_poisson(self, z: np.ndarray) -> np.ndarray:
        """Poisson integral of the closed form at each point, split at arg z and at the breakpoints."""
        function = self.function
        if function is None:
            return self.poisson(DiscPoints.from_complex(z))
        result = np.empty(z.shape)
        for index, w in np.ndenumerate(z):
            result[index] = _closed_form_poisson(function, self.breakpoints, complex(w))
        return result

    def fourier(self, orders: np.ndarray) -> np.ndarray:
        """(1/2pi) int e^(-ikt) density(t) dt for the integer orders k (which may be negative)."""
        orders = np.asarray(orders, dtype=int)
        result = np.zeros(orders.shape, dtype=complex)
        if self.kind == "constant":
            result[orders == 0] = self.value
        elif self.kind == "samples":
            c = self._coefficients
            magnitude = np.abs(orders)
            inside = magnitude < c.size
            picked = c[np.minimum(magnitude, c.size - 1)]
            result = np.where(inside, np.where(orders >= 0, picked, np.conj(picked)), 0.0)
        return result

    def poisson(self, points: DiscPoints) -> np.ndarray:
        if self.kind == "constant":
            return np.full(np.broadcast(points.d, points.theta).shape, self.value)
        if self.kind == "samples":
            c = self._coefficients
            series = 2.0 * c
            series[0] = c[0]
            if len(self.samples) % 2 == 0:
                series[-1] = c[-1]
            return np.asarray(evaluate_series(series, points.z).real)
        return np.zeros(np.broadcast(points.d, points.theta).shape)

    def __add__(self, other: Density) -> Density:
        if self.kind == "zero":
            return other
        if other.kind == "zero":
            return self
        if self.kind == "constant" and other.kind == "constant":
            return Density("constant", self.value + other.value)
        if self.kind == "constant" or other.kind == "constant":
            sampled, constant = (other, self) if self.kind == "constant" else (self, other)
            return Density(
                "samples",
                samples=tuple(s + constant.value for s in sampled.samples),
                function=_sum_forms(sampled.function, lambda t: np.full(np.shape(t), constant.value)),
                breakpoints=sampled.breakpoints,
            )
        if len(self.samples) != len(other.samples):
            raise InvalidMeasureError(reason="cannot add sampled densities on different grids")
        return Density(
            "samples",
            samples=tuple(a + b for a, b in zip(self.samples, other.samples)),
            function=_sum_forms(self.function, other.function),
            breakpoints=tuple(sorted({*self.breakpoints, *other.breakpoints})),
        )

    def scaled(self, factor: float) -> Density:
        if self.kind == "constant":
            return Density("constant", self.value * factor)
        if self.kind == "samples":
            return Density(
                "samples",
                samples=tuple(s * factor for s in self.samples),
                function=_scaled_form(self.function, factor),
                breakpoints=self.breakpoints,
            )
        return self


@dataclass(frozen=True)
class CircleMeasure:
    """
    Finite positive Borel measure on the unit circle: finitely many atoms plus an absolutely continuous part.

    Attributes:
        atoms           : Point masses.
        density         : Absolutely continuous part.
        mass_convention : Records that preset masses use arc length (Lebesgue has mass 2 pi).
    """

    atoms: tuple[Atom, ...] = ()
    density: Density = field(default_factory=Density)
    mass_convention: MassConvention = "arc-length"

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not math.isfinite(self.total_mass):
            raise InvalidMeasureError(reason="total mass is not finite")

    @classmethod
    def lebesgue(cls) -> CircleMeasure:
        """Arc-length measure on the circle (total mass 2 pi)."""
        return cls(density=Density("constant", 1.0))

    @classmethod
    def zero(cls) -> CircleMeasure:
        return cls()

    @classmethod
    def dirac(cls, angle: float, mass: float = TWO_PI) -> CircleMeasure:
        """Point mass at e^(i angle); the default mass 2 pi makes P_mu(0) = 1."""
        return cls(atoms=(Atom(angle, mass),))

    @classmethod
    def from_density(
        cls, density: DensityFn, samples: int = 4096, breakpoints: Sequence[float] = ()
    ) -> CircleMeasure:
        """
        Samples a closed-form density on a uniform grid of `samples` points and keeps the closed form.

        Args:
            density     : Vectorised t -> density(t), nonnegative and 2 pi periodic.
            samples     : Grid size of the sampled representation.
            breakpoints : Angles where the density has sharp features.
        """
        t = TWO_PI * np.arange(samples) / samples
        values = np.broadcast_to(np.asarray(density(t), dtype=float), t.shape)
        return cls(
            density=Density(
                "samples",
                samples=tuple(float(v) for v in values),
                function=density,
                breakpoints=tuple(_normalize_angle(a) for a in breakpoints),
            )
        )

    @classmethod
    def preset(cls, name: str) -> CircleMeasure:
        """
        Parses the presets "lebesgue", "zero" and "dirac(angle)".

        Raises:
            InvalidMeasureError: For unknown presets or unparsable angles.
        """
        key = name.strip().lower()
        if key == "lebesgue":
            return cls.lebesgue()
        if key == "zero":
            return cls.zero()

        match = _DIRAC_PATTERN.match(key)
        if match:
            try:
                return cls.dirac(parse_angle(match.group("angle")))
            except ValueError as exc:
                raise InvalidMeasureError(reason=str(exc)) from exc

        raise InvalidMeasureError(reason=f"unknown preset {name!r}")

    @property
    def total_mass(self) -> float:
        return math.fsum(a.mass for a in self.atoms) + self.density.mass

    @property
    def singular_angles(self) -> tuple[float, ...]:
        """Angles of the atoms and of the density's sharp features, where P_mu concentrates near the boundary."""
        return tuple(a.angle for a in self.atoms if a.mass > 0) + self.density.breakpoints

    @property
    def is_zero(self) -> bool:
        return self.total_mass == 0.0

    def poisson(self, points: DiscPoints) -> np.ndarray:
        """Vectorised P_mu on polar points (no domain check)."""
        return np.asarray(self.density.poisson(points), dtype=float) + self.atom_poisson(points)

    def atom_poisson(self, points: DiscPoints) -> np.ndarray:
        """P_mu of the atoms alone."""
        result = np.zeros(np.broadcast(points.d, points.theta).shape)
        for atom in self.atoms:
            if atom.mass > 0:
                result = result + (atom.mass / TWO_PI) * points.poisson_kernel(atom.angle)
        return result

    def fourier(self, orders: np.ndarray) -> np.ndarray:
        """Fourier coefficients mu^(k) = (1/2pi) int e^(-ik t) dmu(t) for integer orders k."""
        orders = np.asarray(orders, dtype=int)
        result = self.density.fourier(orders)
        for atom in self.atoms:
            result = result + (atom.mass / TWO_PI) * np.exp(-1j * orders * atom.angle)
        return result

    def __add__(self, other: CircleMeasure) -> CircleMeasure:
        return CircleMeasure(atoms=self.atoms + other.atoms, density=self.density + other.density)

    def __rmul__(self, factor: float) -> CircleMeasure:
        return self.scaled(factor)

    def scaled(self, factor: float) -> CircleMeasure:
        if not math.isfinite(factor) or factor < 0:
            raise InvalidMeasureError(reason=f"measures can only be scaled by nonnegative numbers, got {factor!r}")
        return CircleMeasure(
            atoms=tuple(Atom(a.angle, a.mass * factor) for a in self.atoms),
            density=self.density.scaled(factor),
        )

    def to_dict(self) -> dict[str, Any]:
        density: dict[str, Any] = {"kind": self.density.kind}
        if self.density.kind == "constant":
            density["value"] = self.density.value
        elif self.density.kind == "samples":
            density["samples"] = list(self.density.samples)
        return {
            "atoms": [{"angle": a.angle, "mass": a.mass} for a in self.atoms],
            "density": density,
            "mass_convention": self.mass_convention,
        }

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> CircleMeasure:
        """
        Builds a measure from its JSON form: a preset string or an object with "atoms" and "density".

        Raises:
            ProblemFileError: With a pointer to the offending field.
        """
        if isinstance(data, str):
            try:
                return cls.preset(data)
            except InvalidMeasureError as exc:
                raise ProblemFileError(pointer=pointer, reason=str(exc)) from exc

        if not isinstance(data, Mapping):
            raise ProblemFileError(pointer=pointer, reason="measure must be a preset name or an object")

        for key in data:
            if key not in ("atoms", "density", "mass_convention"):
                raise ProblemFileError(pointer=f"{pointer}/{key}", reason="unknown measure field")

        if data.get("mass_convention", "arc-length") != "arc-length":
            raise ProblemFileError(pointer=f"{pointer}/mass_convention", reason="only 'arc-length' is supported")

        atoms = _parse_atoms(data.get("atoms", []), f"{pointer}/atoms")
        density = _parse_density(data.get("density", {"kind": "zero"}), f"{pointer}/density")
        try:
            return cls(atoms=atoms, density=density)
        except InvalidMeasureError as exc:
            raise ProblemFileError(pointer=pointer, reason=str(exc)) from exc


def _number(value: Any, pointer: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemFileError(pointer=pointer, reason="expected a number")
    return float(value)


def _parse_atoms(data: Any, pointer: str) -> tuple[Atom, ...]:
    if not isinstance(data, Sequence) or isinstance(data, str):
        raise ProblemFileError(pointer=pointer, reason="atoms must be a list")

    atoms = []
    for i, item in enumerate(data):
        item_pointer = f"{pointer}/{i}"
        if not isinstance(item, Mapping):
            raise ProblemFileError(pointer=item_pointer, reason="atom must be an object")
        for key in item:
            if key not in ("angle", "mass"):
                raise ProblemFileError(pointer=f"{item_pointer}/{key}", reason="unknown atom field")
        for key in ("angle", "mass"):
            if key not in item:
                raise ProblemFileError(pointer=f"{item_pointer}/{key}", reason="missing field")

        angle = item["angle"]
        if isinstance(angle, str):
            try:
                angle = parse_angle(angle)
            except ValueError as exc:
                raise ProblemFileError(pointer=f"{item_pointer}/angle", reason=str(exc)) from exc
        try:
            atoms.append(Atom(_number(angle, f"{item_pointer}/angle"), _number(item["mass"], f"{item_pointer}/mass")))
        except InvalidMeasureError as exc:
            raise ProblemFileError(pointer=item_pointer, reason=str(exc)) from exc
    return tuple(atoms)


def _parse_density(data: Any, pointer: str) -> Density:
    if not isinstance(data, Mapping):
        raise ProblemFileError(pointer=pointer, reason="density must be an object")

    kind = data.get("kind")
    allowed = {"zero": ("kind",), "constant": ("kind", "value"), "samples": ("kind", "samples")}
    if kind not in allowed:
        raise ProblemFileError(pointer=f"{pointer}/kind", reason=f"unknown density kind {kind!r}")
    for key in data:
        if key not in allowed[kind]:
            raise ProblemFileError(pointer=f"{pointer}/{key}", reason=f"unknown field for density kind {kind!r}")

    try:
        if kind == "constant":
            return Density("constant", _number(data.get("value"), f"{pointer}/value"))
        if kind == "samples":
            samples = data.get("samples")
            if not isinstance(samples, Sequence) or isinstance(samples, str):
                raise ProblemFileError(pointer=f"{pointer}/samples", reason="samples must be a list")
            values = tuple(_number(v, f"{pointer}/samples/{i}") for i, v in enumerate(samples))
            return Density("samples", samples=values)
    except InvalidMeasureError as exc:
        raise ProblemFileError(pointer=pointer, reason=str(exc)) from exc
    return Density()


def _check_disc(z: np.ndarray) -> None:
    modulus = np.abs(z)
    if not np.all(modulus < 1.0):
        bad = complex(np.ravel(z)[np.argmax(np.ravel(modulus) >= 1.0)])
        raise DomainError(value=bad, constraint="|z| < 1")


def poisson_integral(mu: CircleMeasure, z: complex | np.ndarray, spec: QuadratureSpec | None = None) -> Any:
    """
    Poisson integral P_mu(z) = int (1 - |z|^2)/|1 - conj(w) z|^2 dmu(w)/(2 pi).

    Atoms are summed in closed form and a constant density is exact. Densities that carry their closed form are
    integrated adaptively against the Poisson kernel; plain sampled densities are summed through their Fourier
    series. The quadrature spec is accepted for a uniform calling convention.

    Args:
        mu      : The measure.
        z       : Point or array of points of the open disc.
        spec    : Quadrature specification.

    Returns:
        A float for scalar input, otherwise an array of the input's shape.

    Raises:
        DomainError: If some |z| >= 1.
    """
    array = np.asarray(z, dtype=complex)
    _check_disc(array)
    points = DiscPoints.from_complex(array)
    if mu.density.function is not None:
        values = mu.atom_poisson(points) + mu.density.closed_form_poisson(array)
    else:
        values = mu.poisson(points)
    values = np.maximum(values, 0.0)
    if array.ndim == 0:
        return float(values)
    return values


def poisson_on_points(mu: CircleMeasure, points: DiscPoints) -> np.ndarray:
    """P_mu on quadrature points, without domain checks."""
    return mu.poisson(points)


def total_mass(mu: CircleMeasure, spec: QuadratureSpec | None = None) -> float:
    """Atom masses plus the mass of the density."""
    return mu.total_mass
