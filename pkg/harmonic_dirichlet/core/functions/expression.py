"""
Closed-form holomorphic functions on the unit disc as immutable expression trees.

Every node evaluates on numpy arrays, carries its derivative as another tree and certifies what quadrature and the
certificates need to know about it: where on the circle it may be singular, whether it can vanish in the disc
and how far left its values can reach.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Any, Iterator

import numpy as np

from harmonic_dirichlet.core.exceptions import DomainError, InvalidFunctionError
from harmonic_dirichlet.core.iterlog import iterate_log, iterate_log_derivative
from harmonic_dirichlet.core.quadrature.rules import TWO_PI, normalize_angles

if TYPE_CHECKING:
    from harmonic_dirichlet.core.functions.outer import OuterFn

log = logging.getLogger(__name__)

UNIT_TOLERANCE = 1e-12
"""Slack when deciding whether a coefficient has modulus one."""


def _affine_nonvanishing(a: complex, b: complex) -> bool:
    return a != 0 and abs(a) >= abs(b)


def _affine_boundary_zero(a: complex, b: complex) -> tuple[float, ...]:
    """Angle of the zero of a + bz when it lies on the unit circle."""
    if b == 0 or abs(abs(a) - abs(b)) > UNIT_TOLERANCE * abs(b):
        return ()
    return (cmath.phase(-a / b),)


class AnalyticFn:
    """
    Base class of the expression nodes.

    Subclasses implement `_evaluate` on arrays (no domain checks, the closed disc is accepted so that boundary
    values can be sampled) and `_derive`, whose result is cached as `derivative`.
    """

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _derive(self) -> AnalyticFn:
        raise NotImplementedError

    @cached_property
    def derivative(self) -> AnalyticFn:
        return self._derive()

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return ()

    def walk(self) -> Iterator[AnalyticFn]:
        yield self
        for child in self.children:
            yield from child.walk()

    def _own_angles(self) -> tuple[float, ...]:
        return ()

    def singular_angles(self) -> tuple[float, ...]:
        """Boundary points where this tree or one of its subtrees is singular or vanishes."""
        return normalize_angles(angle for node in self.walk() for angle in node._own_angles())

    def affine_coefficients(self) -> tuple[complex, complex] | None:
        """(a, b) when the node is the affine map a + bz, else None."""
        return None

    def real_lower_bound(self) -> float:
        """Lower bound of Re f on the disc, -inf when nothing is known."""
        return -math.inf

    def _nonvanishing(self) -> bool:
        coefficients = self.affine_coefficients()
        return coefficients is not None and _affine_nonvanishing(*coefficients)

    @property
    def nonvanishing(self) -> bool:
        """Whether the node is certified zero-free on the open disc."""
        return self._nonvanishing() or self.real_lower_bound() > 0.0

    def log_value(self, z: np.ndarray) -> np.ndarray:
        """
        A logarithm of the node's values. Continuous along the disc for powers, products, quotients, exponentials,
        affine maps and outer leaves; the principal logarithm of the value otherwise.
        """
        coefficients = self.affine_coefficients()
        if coefficients is not None and coefficients[0] != 0:
            a, b = coefficients
            return np.full(np.shape(z), cmath.log(a), dtype=complex) + np.log1p((b / a) * np.asarray(z))
        return np.log(self._evaluate(z))

    @property
    def contains_outer(self) -> bool:
        return any(isinstance(node, (OuterLeaf, OuterLeafDerivative)) for node in self.walk())

    def __call__(self, z: Any) -> Any:
        return evaluate(self, z)

    def __add__(self, other: Any) -> AnalyticFn:
        return add(self, as_function(other))

    def __radd__(self, other: Any) -> AnalyticFn:
        return add(as_function(other), self)

    def __sub__(self, other: Any) -> AnalyticFn:
        return add(self, multiply(Constant(-1.0), as_function(other)))

    def __rsub__(self, other: Any) -> AnalyticFn:
        return add(as_function(other), multiply(Constant(-1.0), self))

    def __mul__(self, other: Any) -> AnalyticFn:
        return multiply(self, as_function(other))

    def __rmul__(self, other: Any) -> AnalyticFn:
        return multiply(as_function(other), self)

    def __truediv__(self, other: Any) -> AnalyticFn:
        return divide(self, as_function(other))

    def __rtruediv__(self, other: Any) -> AnalyticFn:
        return divide(as_function(other), self)

    def __neg__(self) -> AnalyticFn:
        return multiply(Constant(-1.0), self)

    def __pow__(self, exponent: int) -> AnalyticFn:
        if isinstance(exponent, bool) or not isinstance(exponent, int) or exponent < 0:
            raise InvalidFunctionError(reason=f"only nonnegative integer exponents are supported, got {exponent!r}")
        if exponent == 0:
            return Constant(1.0)
        return multiply(*([self] * exponent))


@dataclass(frozen=True, eq=False)
class Constant(AnalyticFn):
    value: complex

    def __post_init__(self) -> None:
        value = complex(self.value)
        if not cmath.isfinite(value):
            raise InvalidFunctionError(reason=f"constant {self.value!r} is not finite")
        object.__setattr__(self, "value", value)

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.full(np.shape(z), self.value, dtype=complex)

    def _derive(self) -> AnalyticFn:
        return Constant(0.0)

    def affine_coefficients(self) -> tuple[complex, complex]:
        return self.value, 0j

    def real_lower_bound(self) -> float:
        return self.value.real

    def log_value(self, z: np.ndarray) -> np.ndarray:
        return np.full(np.shape(z), np.log(self.value), dtype=complex)


@dataclass(frozen=True, eq=False)
class Identity(AnalyticFn):
    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=complex)

    def _derive(self) -> AnalyticFn:
        return Constant(1.0)

    def affine_coefficients(self) -> tuple[complex, complex]:
        return 0j, 1 + 0j

    def real_lower_bound(self) -> float:
        return -1.0


@dataclass(frozen=True, eq=False)
class Sum(AnalyticFn):
    terms: tuple[AnalyticFn, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return self.terms

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        result = np.zeros(np.shape(z), dtype=complex)
        for term in self.terms:
            result = result + term._evaluate(z)
        return result

    def _derive(self) -> AnalyticFn:
        return add(*(term.derivative for term in self.terms))

    def affine_coefficients(self) -> tuple[complex, complex] | None:
        a, b = 0j, 0j
        for term in self.terms:
            coefficients = term.affine_coefficients()
            if coefficients is None:
                return None
            a, b = a + coefficients[0], b + coefficients[1]
        return a, b

    def real_lower_bound(self) -> float:
        return math.fsum(term.real_lower_bound() for term in self.terms)

    def _own_angles(self) -> tuple[float, ...]:
        coefficients = self.affine_coefficients()
        return () if coefficients is None else _affine_boundary_zero(*coefficients)


@dataclass(frozen=True, eq=False)
class Product(AnalyticFn):
    factors: tuple[AnalyticFn, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return self.factors

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        result = np.ones(np.shape(z), dtype=complex)
        for factor in self.factors:
            result = result * factor._evaluate(z)
        return result

    def _derive(self) -> AnalyticFn:
        return add(
            *(
                multiply(*(f.derivative if i == j else f for j, f in enumerate(self.factors)))
                for i in range(len(self.factors))
            )
        )

    def _split(self) -> tuple[complex, list[AnalyticFn]]:
        constant, others = 1 + 0j, []
        for factor in self.factors:
            if isinstance(factor, Constant):
                constant *= factor.value
            else:
                others.append(factor)
        return constant, others

    def affine_coefficients(self) -> tuple[complex, complex] | None:
        constant, others = self._split()
        if not others:
            return constant, 0j
        if len(others) > 1:
            return None
        coefficients = others[0].affine_coefficients()
        if coefficients is None:
            return None
        return constant * coefficients[0], constant * coefficients[1]

    def real_lower_bound(self) -> float:
        constant, others = self._split()
        if not others:
            return constant.real
        if len(others) == 1 and constant.imag == 0 and constant.real > 0:
            return constant.real * others[0].real_lower_bound()
        return -math.inf

    def _nonvanishing(self) -> bool:
        return all(factor.nonvanishing for factor in self.factors)

    def log_value(self, z: np.ndarray) -> np.ndarray:
        result = np.zeros(np.shape(z), dtype=complex)
        for factor in self.factors:
            result = result + factor.log_value(z)
        return result


@dataclass(frozen=True, eq=False)
class Quotient(AnalyticFn):
    """numerator/denominator, with the denominator certified zero-free on the open disc."""

    numerator: AnalyticFn
    denominator: AnalyticFn

    def __post_init__(self) -> None:
        if not self.denominator.nonvanishing:
            raise InvalidFunctionError(reason=f"denominator {self.denominator!r} may vanish in the disc")

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return self.numerator, self.denominator

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.numerator._evaluate(z) / self.denominator._evaluate(z)

    def _derive(self) -> AnalyticFn:
        top = add(
            multiply(self.numerator.derivative, self.denominator),
            multiply(Constant(-1.0), self.numerator, self.denominator.derivative),
        )
        return divide(top, multiply(self.denominator, self.denominator))

    def affine_coefficients(self) -> tuple[complex, complex] | None:
        coefficients = self.numerator.affine_coefficients()
        if coefficients is None or not isinstance(self.denominator, Constant):
            return None
        return coefficients[0] / self.denominator.value, coefficients[1] / self.denominator.value

    def _nonvanishing(self) -> bool:
        return self.numerator.nonvanishing

    def log_value(self, z: np.ndarray) -> np.ndarray:
        return self.numerator.log_value(z) - self.denominator.log_value(z)


@dataclass(frozen=True, eq=False)
class Scale(AnalyticFn):
    factor: complex
    arg: AnalyticFn

    def __post_init__(self) -> None:
        factor = complex(self.factor)
        if not cmath.isfinite(factor):
            raise InvalidFunctionError(reason=f"scale factor {self.factor!r} is not finite")
        object.__setattr__(self, "factor", factor)

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return (self.arg,)

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.factor * self.arg._evaluate(z)

    def _derive(self) -> AnalyticFn:
        return multiply(Constant(self.factor), self.arg.derivative)

    def affine_coefficients(self) -> tuple[complex, complex] | None:
        coefficients = self.arg.affine_coefficients()
        if coefficients is None:
            return None
        return self.factor * coefficients[0], self.factor * coefficients[1]

    def real_lower_bound(self) -> float:
        if self.factor.imag == 0 and self.factor.real > 0:
            return self.factor.real * self.arg.real_lower_bound()
        return -math.inf

    def _nonvanishing(self) -> bool:
        return self.factor != 0 and self.arg.nonvanishing

    def log_value(self, z: np.ndarray) -> np.ndarray:
        return np.log(self.factor) + self.arg.log_value(z)


@dataclass(frozen=True, eq=False)
class Power(AnalyticFn):
    """
    scale * (1 - lam z)^alpha on the principal branch, with |lam| <= 1 and real alpha.

    1 - lam z stays in the right half-plane on the disc, so the branch is continuous there.
    """

    scale: complex
    lam: complex
    alpha: float

    def __post_init__(self) -> None:
        scale, lam, alpha = complex(self.scale), complex(self.lam), float(self.alpha)
        if not (cmath.isfinite(scale) and cmath.isfinite(lam) and math.isfinite(alpha)):
            raise InvalidFunctionError(reason="power parameters must be finite")
        if abs(lam) > 1.0 + UNIT_TOLERANCE:
            raise InvalidFunctionError(reason=f"|lambda| = {abs(lam)!r} exceeds 1, the power has a branch point inside")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha", alpha)

    @property
    def on_circle(self) -> bool:
        return abs(abs(self.lam) - 1.0) <= UNIT_TOLERANCE

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        if self.alpha == 0.0 or self.lam == 0:
            return np.full(np.shape(z), self.scale, dtype=complex)
        return self.scale * np.exp(self.alpha * np.log(1.0 - self.lam * np.asarray(z, dtype=complex)))

    def _derive(self) -> AnalyticFn:
        if self.alpha == 0.0 or self.lam == 0 or self.scale == 0:
            return Constant(0.0)
        return Power(-self.scale * self.lam * self.alpha, self.lam, self.alpha - 1.0)

    def affine_coefficients(self) -> tuple[complex, complex] | None:
        if self.alpha == 0.0 or self.lam == 0:
            return self.scale, 0j
        if self.alpha == 1.0:
            return self.scale, -self.scale * self.lam
        return None

    def real_lower_bound(self) -> float:
        if self.scale.imag != 0 or self.scale.real <= 0 or abs(self.alpha) > 1.0:
            return -math.inf
        if self.alpha == 0.0:
            return self.scale.real
        radius = min(abs(self.lam), 1.0)
        modulus = (1.0 - radius) ** self.alpha if self.alpha > 0 else (1.0 + radius) ** self.alpha
        return self.scale.real * modulus * math.cos(0.5 * math.pi * self.alpha)

    def _nonvanishing(self) -> bool:
        return self.scale != 0

    def _own_angles(self) -> tuple[float, ...]:
        if self.on_circle and self.alpha != 0.0:
            return (-cmath.phase(self.lam),)
        return ()

    def log_value(self, z: np.ndarray) -> np.ndarray:
        return np.log(self.scale) + self.alpha * np.log(1.0 - self.lam * np.asarray(z, dtype=complex))


@dataclass(frozen=True, eq=False)
class Exp(AnalyticFn):
    arg: AnalyticFn

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return (self.arg,)

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.exp(self.arg._evaluate(z))

    def _derive(self) -> AnalyticFn:
        return multiply(self, self.arg.derivative)

    def _nonvanishing(self) -> bool:
        return True

    def log_value(self, z: np.ndarray) -> np.ndarray:
        return self.arg._evaluate(z)


def _log_admissible(arg: AnalyticFn) -> bool:
    lower = arg.real_lower_bound()
    if lower > 0.0 or (lower >= 0.0 and arg.nonvanishing):
        return True
    if isinstance(arg, Power):
        return arg.scale.imag == 0 and arg.scale.real > 0 and abs(arg.alpha) < 2.0
    if isinstance(arg, Constant):
        return arg.value != 0 and not (arg.value.imag == 0 and arg.value.real < 0)
    return False


@dataclass(frozen=True, eq=False)
class Log(AnalyticFn):
    """Principal logarithm, admitted only for arguments certified to stay off the slit (-inf, 0]."""

    arg: AnalyticFn

    def __post_init__(self) -> None:
        if not _log_admissible(self.arg):
            raise InvalidFunctionError(reason=f"logarithm argument {self.arg!r} may reach (-inf, 0]")

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return (self.arg,)

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.log(self.arg._evaluate(z))

    def _derive(self) -> AnalyticFn:
        return divide(self.arg.derivative, self.arg)


@dataclass(frozen=True, eq=False)
class IterLog(AnalyticFn):
    """G_n composed with a subtree whose values stay in the closed right half-plane."""

    n: int
    arg: AnalyticFn

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise InvalidFunctionError(reason=f"iteration count {self.n!r} is not a nonnegative integer")
        if self.arg.real_lower_bound() < 0.0:
            raise InvalidFunctionError(reason=f"argument {self.arg!r} of G_{self.n} may leave Re w >= 0")

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return (self.arg,)

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return iterate_log(self.n, self.arg._evaluate(z))

    def _derive(self) -> AnalyticFn:
        if self.n == 0:
            return self.arg.derivative
        return multiply(IterLogDerivative(self.n, self.arg), self.arg.derivative)

    def real_lower_bound(self) -> float:
        return self.arg.real_lower_bound() if self.n == 0 else 0.0

    def _nonvanishing(self) -> bool:
        return self.arg.real_lower_bound() > 0.0


@dataclass(frozen=True, eq=False)
class IterLogDerivative(AnalyticFn):
    """G_n' composed with a subtree; used only inside derivative trees."""

    n: int
    arg: AnalyticFn

    @property
    def children(self) -> tuple[AnalyticFn, ...]:
        return (self.arg,)

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return iterate_log_derivative(self.n, self.arg._evaluate(z))

    def _derive(self) -> AnalyticFn:
        raise InvalidFunctionError(reason="second derivatives of iterated logarithms are not supported")

    def _nonvanishing(self) -> bool:
        return True


@dataclass(frozen=True, eq=False)
class OuterLeaf(AnalyticFn):
    """An outer function given by boundary data, embedded in a tree."""

    outer: OuterFn

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.outer.values(z)

    def _derive(self) -> AnalyticFn:
        return OuterLeafDerivative(self.outer)

    def _nonvanishing(self) -> bool:
        return True

    def _own_angles(self) -> tuple[float, ...]:
        return self.outer.singular_angles

    def log_value(self, z: np.ndarray) -> np.ndarray:
        return self.outer.log_value(z)


@dataclass(frozen=True, eq=False)
class OuterLeafDerivative(AnalyticFn):
    outer: OuterFn

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.outer.derivative_values(z)

    def _derive(self) -> AnalyticFn:
        raise InvalidFunctionError(reason="second derivatives of outer functions are not supported")

    def _own_angles(self) -> tuple[float, ...]:
        return self.outer.singular_angles


def as_function(value: Any) -> AnalyticFn:
    """Wraps numbers as constants and outer functions as leaves; trees pass through."""
    from harmonic_dirichlet.core.functions.outer import OuterFn

    if isinstance(value, AnalyticFn):
        return value
    if isinstance(value, OuterFn):
        return OuterLeaf(value)
    if isinstance(value, (int, float, complex, np.number)) and not isinstance(value, bool):
        return Constant(complex(value))
    raise InvalidFunctionError(reason=f"cannot interpret {value!r} as an analytic function")


def add(*terms: AnalyticFn) -> AnalyticFn:
    """Sum with nested sums flattened and constants folded."""
    constant = 0j
    others: list[AnalyticFn] = []
    for term in terms:
        for piece in term.terms if isinstance(term, Sum) else (term,):
            if isinstance(piece, Constant):
                constant += piece.value
            else:
                others.append(piece)

    if constant != 0 or not others:
        others.insert(0, Constant(constant))
    return others[0] if len(others) == 1 else Sum(tuple(others))


def multiply(*factors: AnalyticFn) -> AnalyticFn:
    """Product with nested products flattened, scalars pulled out and constants folded."""
    constant = 1 + 0j
    others: list[AnalyticFn] = []
    pending = list(factors)
    while pending:
        factor = pending.pop(0)
        if isinstance(factor, Constant):
            constant *= factor.value
        elif isinstance(factor, Scale):
            constant *= factor.factor
            pending.insert(0, factor.arg)
        elif isinstance(factor, Product):
            pending[:0] = factor.factors
        else:
            others.append(factor)

    if constant == 0 or not others:
        return Constant(constant)
    body = others[0] if len(others) == 1 else Product(tuple(others))
    if constant == 1:
        return body
    if isinstance(body, Power):
        return Power(constant * body.scale, body.lam, body.alpha)
    return Scale(constant, body)


def divide(numerator: AnalyticFn, denominator: AnalyticFn) -> AnalyticFn:
    """
    Raises:
        InvalidFunctionError: If the denominator is not certified zero-free.
    """
    if isinstance(denominator, Constant):
        if denominator.value == 0:
            raise InvalidFunctionError(reason="division by the zero constant")
        return multiply(Constant(1.0 / denominator.value), numerator)
    if isinstance(numerator, Constant) and numerator.value == 0:
        return Constant(0.0)
    return Quotient(numerator, denominator)


def _disc_array(z: Any) -> np.ndarray:
    array = np.asarray(z, dtype=complex)
    bad = ~np.isfinite(array) | (np.abs(array) >= 1.0)
    if np.any(bad):
        raise DomainError(value=complex(array[bad].flat[0]), constraint="|z| < 1")
    return array


def _unwrap(values: np.ndarray, array: np.ndarray) -> Any:
    return complex(values) if array.ndim == 0 else values


def evaluate(f: AnalyticFn | OuterFn, z: Any) -> Any:
    """
    Value of f at a point or an array of points of the open disc.

    Raises:
        DomainError: If some |z| >= 1.
    """
    node = as_function(f)
    array = _disc_array(z)
    with np.errstate(all="ignore"):
        values = node._evaluate(array)
    return _unwrap(values, array)


def deriv(f: AnalyticFn | OuterFn, z: Any) -> Any:
    """
    Value of f' through the derivative tree.

    Raises:
        DomainError: If some |z| >= 1.
    """
    node = as_function(f)
    array = _disc_array(z)
    with np.errstate(all="ignore"):
        values = node.derivative._evaluate(array)
    return _unwrap(values, array)


def analytic_log(f: AnalyticFn | OuterFn, z: np.ndarray) -> np.ndarray:
    """
    Logarithm of a zero-free f, continuous along the disc and principal at the origin.

    Args:
        f   : A tree certified or sampled to be zero-free.
        z   : Points of the closed disc (no domain check).
    """
    node = as_function(f)
    origin = np.zeros(1, dtype=complex)
    with np.errstate(all="ignore"):
        at_zero = complex(node.log_value(origin)[0])
        value_at_zero = complex(node._evaluate(origin)[0])
        values = node.log_value(np.asarray(z, dtype=complex))
    if value_at_zero == 0 or not cmath.isfinite(at_zero):
        return values
    principal = cmath.log(value_at_zero)
    turns = round((at_zero.imag - principal.imag) / TWO_PI)
    return values - 1j * TWO_PI * turns


def identity() -> AnalyticFn:
    return Identity()


def constant(value: complex) -> AnalyticFn:
    return Constant(value)
