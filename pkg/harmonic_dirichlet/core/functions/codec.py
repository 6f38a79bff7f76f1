from __future__ import annotations

import math
from typing import Any, Callable, Mapping

from harmonic_dirichlet.core.exceptions import (
    InvalidFunctionError,
    InvalidSamplesError,
    NotOuterError,
    ProblemFileError,
)
from harmonic_dirichlet.core.functions.boundary import Function, outer_min
from harmonic_dirichlet.core.functions.expression import (
    AnalyticFn,
    Constant,
    Exp,
    Identity,
    IterLog,
    Log,
    OuterLeaf,
    Power,
    Product,
    Quotient,
    Scale,
    Sum,
    as_function,
)
from harmonic_dirichlet.core.functions.outer import OuterFn
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec

_FIELDS: dict[str, frozenset[str]] = {
    "constant": frozenset({"value"}),
    "identity": frozenset(),
    "sum": frozenset({"terms"}),
    "product": frozenset({"terms"}),
    "quotient": frozenset({"numerator", "denominator"}),
    "scale": frozenset({"factor", "arg"}),
    "power": frozenset({"scale", "lambda", "alpha"}),
    "exp": frozenset({"arg"}),
    "log": frozenset({"arg"}),
    "gn_compose": frozenset({"n", "arg"}),
    "outer_min": frozenset({"left", "right"}),
    "outer_samples": frozenset({"samples"}),
}
_REQUIRED: dict[str, frozenset[str]] = {
    **_FIELDS,
    "power": frozenset({"alpha"}),
}


def parse_complex(value: Any, pointer: str) -> complex:
    """A complex number written as a JSON number or a [re, im] pair."""
    if isinstance(value, bool):
        raise ProblemFileError(pointer=pointer, reason="expected a number or [re, im]")
    if isinstance(value, (int, float)):
        result = complex(value)
    elif isinstance(value, list) and len(value) == 2 and all(_is_number(v) for v in value):
        result = complex(value[0], value[1])
    else:
        raise ProblemFileError(pointer=pointer, reason="expected a number or [re, im]")

    if not (math.isfinite(result.real) and math.isfinite(result.imag)):
        raise ProblemFileError(pointer=pointer, reason="number is not finite")
    return result


def encode_complex(value: complex) -> float | list[float]:
    value = complex(value)
    return value.real if value.imag == 0 else [value.real, value.imag]


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _sample(value: Any, pointer: str) -> float:
    if value == "-inf":
        return -math.inf
    if not _is_number(value):
        raise ProblemFileError(pointer=pointer, reason='expected a number or "-inf"')
    return float(value)


class FunctionDecoder:
    """
    Builds functions from their JSON trees. Every error names the JSON pointer of the offending node.

    Args:
        spec: Quadrature specification used by nodes that need boundary computations (`outer_min`).
    """

    def __init__(self, spec: QuadratureSpec | None = None) -> None:
        self.spec = spec or QuadratureSpec()
        self._builders: dict[str, Callable[[Mapping[str, Any], str], Function]] = {
            "constant": self._constant,
            "identity": lambda data, pointer: Identity(),
            "sum": self._sum,
            "product": self._product,
            "quotient": self._quotient,
            "scale": self._scale,
            "power": self._power,
            "exp": lambda data, pointer: Exp(self._child(data, "arg", pointer)),
            "log": lambda data, pointer: Log(self._child(data, "arg", pointer)),
            "gn_compose": self._gn_compose,
            "outer_min": self._outer_min,
            "outer_samples": self._outer_samples,
        }

    def decode(self, data: Any, pointer: str = "") -> Function:
        """
        Raises:
            ProblemFileError: For unknown kinds, unknown or missing fields, bad values and nodes that fail
                their own certification.
        """
        if not isinstance(data, Mapping):
            raise ProblemFileError(pointer=pointer, reason="expected a function object")
        kind = data.get("kind")
        if kind not in self._builders:
            raise ProblemFileError(pointer=f"{pointer}/kind", reason=f"unknown function kind {kind!r}")

        fields = set(data) - {"kind"}
        unknown = sorted(fields - _FIELDS[kind])
        if unknown:
            raise ProblemFileError(pointer=f"{pointer}/{unknown[0]}", reason=f"unknown field for kind {kind!r}")
        missing = sorted(_REQUIRED[kind] - fields)
        if missing:
            raise ProblemFileError(pointer=f"{pointer}/{missing[0]}", reason=f"missing field for kind {kind!r}")

        try:
            return self._builders[kind](data, pointer)
        except (InvalidFunctionError, InvalidSamplesError, NotOuterError) as exc:
            raise ProblemFileError(pointer=pointer, reason=str(exc)) from exc

    def _child(self, data: Mapping[str, Any], key: str, pointer: str) -> AnalyticFn:
        return as_function(self.decode(data[key], f"{pointer}/{key}"))

    def _children(self, data: Mapping[str, Any], pointer: str) -> list[AnalyticFn]:
        terms = data["terms"]
        if not isinstance(terms, list) or not terms:
            raise ProblemFileError(pointer=f"{pointer}/terms", reason="expected a non-empty list")
        return [as_function(self.decode(term, f"{pointer}/terms/{i}")) for i, term in enumerate(terms)]

    def _constant(self, data: Mapping[str, Any], pointer: str) -> Function:
        return Constant(parse_complex(data["value"], f"{pointer}/value"))

    def _sum(self, data: Mapping[str, Any], pointer: str) -> Function:
        return Sum(tuple(self._children(data, pointer)))

    def _product(self, data: Mapping[str, Any], pointer: str) -> Function:
        return Product(tuple(self._children(data, pointer)))

    def _quotient(self, data: Mapping[str, Any], pointer: str) -> Function:
        return Quotient(self._child(data, "numerator", pointer), self._child(data, "denominator", pointer))

    def _scale(self, data: Mapping[str, Any], pointer: str) -> Function:
        return Scale(parse_complex(data["factor"], f"{pointer}/factor"), self._child(data, "arg", pointer))

    def _power(self, data: Mapping[str, Any], pointer: str) -> Function:
        alpha = data["alpha"]
        if not _is_number(alpha):
            raise ProblemFileError(pointer=f"{pointer}/alpha", reason="expected a real number")
        scale = parse_complex(data.get("scale", 1.0), f"{pointer}/scale")
        lam = parse_complex(data.get("lambda", 1.0), f"{pointer}/lambda")
        return Power(scale, lam, float(alpha))

    def _gn_compose(self, data: Mapping[str, Any], pointer: str) -> Function:
        n = data["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ProblemFileError(pointer=f"{pointer}/n", reason="expected a nonnegative integer")
        return IterLog(n, self._child(data, "arg", pointer))

    def _outer_min(self, data: Mapping[str, Any], pointer: str) -> Function:
        left = self.decode(data["left"], f"{pointer}/left")
        right = self.decode(data["right"], f"{pointer}/right")
        return outer_min(left, right, self.spec)

    def _outer_samples(self, data: Mapping[str, Any], pointer: str) -> Function:
        samples = data["samples"]
        if not isinstance(samples, list):
            raise ProblemFileError(pointer=f"{pointer}/samples", reason="expected a list of samples")
        return OuterFn.from_log_modulus([_sample(v, f"{pointer}/samples/{i}") for i, v in enumerate(samples)])


def decode_function(data: Any, pointer: str = "", spec: QuadratureSpec | None = None) -> Function:
    """Builds a function from its JSON tree."""
    return FunctionDecoder(spec).decode(data, pointer)


def encode_function(f: Function) -> dict[str, Any]:
    """
    JSON tree of a function. Outer functions are written by their samples, so outer minima come back as
    `outer_samples` nodes.

    Raises:
        InvalidFunctionError: For derivative-only nodes, which have no JSON form.
    """
    if isinstance(f, OuterFn):
        samples = [v if math.isfinite(v) else "-inf" for v in map(float, f.log_modulus)]
        return {"kind": "outer_samples", "samples": samples}
    if isinstance(f, OuterLeaf):
        return encode_function(f.outer)
    if isinstance(f, Constant):
        return {"kind": "constant", "value": encode_complex(f.value)}
    if isinstance(f, Identity):
        return {"kind": "identity"}
    if isinstance(f, Sum):
        return {"kind": "sum", "terms": [encode_function(t) for t in f.terms]}
    if isinstance(f, Product):
        return {"kind": "product", "terms": [encode_function(t) for t in f.factors]}
    if isinstance(f, Quotient):
        return {
            "kind": "quotient",
            "numerator": encode_function(f.numerator),
            "denominator": encode_function(f.denominator),
        }
    if isinstance(f, Scale):
        return {"kind": "scale", "factor": encode_complex(f.factor), "arg": encode_function(f.arg)}
    if isinstance(f, Power):
        return {"kind": "power", "scale": encode_complex(f.scale), "lambda": encode_complex(f.lam), "alpha": f.alpha}
    if isinstance(f, Exp):
        return {"kind": "exp", "arg": encode_function(f.arg)}
    if isinstance(f, Log):
        return {"kind": "log", "arg": encode_function(f.arg)}
    if isinstance(f, IterLog):
        return {"kind": "gn_compose", "n": f.n, "arg": encode_function(f.arg)}
    raise InvalidFunctionError(reason=f"{type(f).__name__} nodes have no JSON form")
