from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from os import PathLike
from typing import Any, Mapping

import aiofiles

from harmonic_dirichlet.core.exceptions import ProblemFileError
from harmonic_dirichlet.core.functions.boundary import Function
from harmonic_dirichlet.core.functions.codec import FunctionDecoder, parse_complex
from harmonic_dirichlet.core.measure import CircleMeasure
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec

PROBLEM_KEYS = ("measure", "function", "quadrature", "params")
FUNCTION_SLOTS = ("g", "h", "h1", "h2", "f")
INTEGER_PARAMS = ("n", "n_max", "k", "samples")
REAL_PARAMS = ("c", "alpha")


def _integer(value: Any, pointer: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(pointer=pointer, reason="expected an integer")
    return value


def _real(value: Any, pointer: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemFileError(pointer=pointer, reason="expected a real number")
    return float(value)


def parse_zeta(value: Any, pointer: str) -> complex:
    """A boundary point written as an angle or as [re, im]."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return cmath.exp(1j * float(value))
    if isinstance(value, list):
        return parse_complex(value, pointer)
    raise ProblemFileError(pointer=pointer, reason="expected an angle or [re, im]")


@dataclass(frozen=True)
class Params:
    """
    Command parameters of a problem file.

    Attributes:
        points      : Disc points ("z" holds a single one, "points" a list).
        zeta        : Boundary point.
        n           : Order of the iterated logarithm, or the cut-off factor.
        n_max       : Largest order checked.
        k           : Larger order of the monotonicity check.
        samples     : Sample count of the half-plane checks.
        c           : Hypothesis constant of the h1/h2 check.
        alpha       : Exponent of the power bound.
        check       : Name of the verification to run.
        functions   : Extra functions g, h, h1, h2 and f.
    """

    points: tuple[complex, ...] = ()
    zeta: complex | None = None
    n: int | None = None
    n_max: int | None = None
    k: int | None = None
    samples: int | None = None
    c: float | None = None
    alpha: float | None = None
    check: str | None = None
    functions: Mapping[str, Function] = field(default_factory=dict)

    def require(self, name: str) -> Any:
        """
        Raises:
            ProblemFileError: If the parameter is missing.
        """
        value = getattr(self, name)
        if value is None or value == ():
            raise ProblemFileError(pointer=f"/params/{name}", reason="required by this command")
        return value

    @classmethod
    def from_dict(cls, data: Any, decoder: FunctionDecoder, pointer: str = "/params") -> Params:
        if not isinstance(data, Mapping):
            raise ProblemFileError(pointer=pointer, reason="params must be an object")

        known = {"z", "points", "zeta", "check", *INTEGER_PARAMS, *REAL_PARAMS, *FUNCTION_SLOTS}
        for key in data:
            if key not in known:
                raise ProblemFileError(pointer=f"{pointer}/{key}", reason="unknown parameter")

        kwargs: dict[str, Any] = {}
        points: list[complex] = []
        if "z" in data:
            points.append(parse_complex(data["z"], f"{pointer}/z"))
        if "points" in data:
            if not isinstance(data["points"], list):
                raise ProblemFileError(pointer=f"{pointer}/points", reason="expected a list of complex numbers")
            points.extend(parse_complex(v, f"{pointer}/points/{i}") for i, v in enumerate(data["points"]))
        kwargs["points"] = tuple(points)

        if "zeta" in data:
            kwargs["zeta"] = parse_zeta(data["zeta"], f"{pointer}/zeta")
        if "check" in data:
            if not isinstance(data["check"], str):
                raise ProblemFileError(pointer=f"{pointer}/check", reason="expected a string")
            kwargs["check"] = data["check"]
        for name in INTEGER_PARAMS:
            if name in data:
                kwargs[name] = _integer(data[name], f"{pointer}/{name}")
        for name in REAL_PARAMS:
            if name in data:
                kwargs[name] = _real(data[name], f"{pointer}/{name}")

        kwargs["functions"] = {
            slot: decoder.decode(data[slot], f"{pointer}/{slot}") for slot in FUNCTION_SLOTS if slot in data
        }
        return cls(**kwargs)


@dataclass(frozen=True)
class ProblemFile:
    """
    Validated problem file: measure, function, quadrature and command parameters.

    Attributes:
        measure     : Circle measure, or None when the file has none.
        function    : Main function, or None when the file has none.
        spec        : Quadrature specification used by every computation of the run.
        params      : Command parameters.
    """

    measure: CircleMeasure | None = None
    function: Function | None = None
    spec: QuadratureSpec = field(default_factory=QuadratureSpec)
    params: Params = field(default_factory=Params)

    @classmethod
    def from_dict(cls, data: Any, spec: QuadratureSpec | None = None) -> ProblemFile:
        """
        Validates a problem document. Nothing is computed before the whole document is accepted.

        Args:
            data    : Parsed JSON document.
            spec    : Overrides the document's quadrature section.

        Raises:
            ProblemFileError: With a JSON pointer to the offending field.
        """
        if not isinstance(data, Mapping):
            raise ProblemFileError(pointer="", reason="problem file must be a JSON object")
        for key in data:
            if key not in PROBLEM_KEYS:
                raise ProblemFileError(pointer=f"/{key}", reason="unknown top-level key")

        if spec is None:
            spec = QuadratureSpec.from_dict(data.get("quadrature", {}), "/quadrature")
        decoder = FunctionDecoder(spec)
        measure = CircleMeasure.from_dict(data["measure"], "/measure") if "measure" in data else None
        function = decoder.decode(data["function"], "/function") if "function" in data else None
        params = Params.from_dict(data.get("params", {}), decoder)
        return cls(measure=measure, function=function, spec=spec, params=params)

    @classmethod
    async def load(cls, path: str | PathLike[str], spec: QuadratureSpec | None = None) -> ProblemFile:
        """
        Reads and validates a problem file.

        Raises:
            ProblemFileError: For unreadable files, malformed JSON and invalid fields.
        """
        return cls.from_dict(await read_json(path), spec)

    def require_measure(self) -> CircleMeasure:
        if self.measure is None:
            raise ProblemFileError(pointer="/measure", reason="required by this command")
        return self.measure

    def require_function(self, slot: str | None = None) -> Function:
        """
        The function in `params[slot]`, falling back to the top-level function.

        Raises:
            ProblemFileError: If neither is present.
        """
        if slot is not None and slot in self.params.functions:
            return self.params.functions[slot]
        if self.function is None:
            pointer = "/function" if slot is None else f"/params/{slot}"
            raise ProblemFileError(pointer=pointer, reason="required by this command")
        return self.function


async def read_json(path: str | PathLike[str]) -> Any:
    """
    Raises:
        ProblemFileError: For unreadable files, bytes that are not UTF-8 and malformed JSON, pointing at the
            document root.
    """
    try:
        async with aiofiles.open(path, encoding="utf-8") as f:
            text = await f.read()
    except OSError as exc:
        raise ProblemFileError(pointer="", reason=f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ProblemFileError(pointer="", reason=f"{path} is not UTF-8 (byte {exc.start})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(pointer="", reason=f"invalid JSON at line {exc.lineno}, column {exc.colno}") from exc


async def load_spec(path: str | PathLike[str]) -> QuadratureSpec:
    """Reads a quadrature specification file."""
    return QuadratureSpec.from_dict(await read_json(path))
