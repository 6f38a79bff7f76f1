from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import pytest

from harmonic_dirichlet.core.corpus import CAYLEY, HALF_AFFINE, HALF_SQRT
from harmonic_dirichlet.core.exceptions import DomainError, InvalidFunctionError, ProblemFileError
from harmonic_dirichlet.core.functions import (
    constant,
    decode_function,
    deriv,
    encode_function,
    evaluate,
    identity,
)
from harmonic_dirichlet.core.functions.codec import parse_complex
from harmonic_dirichlet.core.functions.expression import Exp, IterLog, Log, Power

ONE_PLUS_Z = {"kind": "sum", "terms": [{"kind": "constant", "value": 1.0}, {"kind": "identity"}]}


@dataclass
class EvaluationTestCase:
    test_id: str
    data: dict[str, Any]
    z: complex
    value: complex
    derivative: complex


evaluation_cases = [
    EvaluationTestCase("identity", {"kind": "identity"}, 0.3 + 0.1j, 0.3 + 0.1j, 1.0),
    EvaluationTestCase(
        "square",
        {"kind": "product", "terms": [{"kind": "identity"}, {"kind": "identity"}]},
        0.3,
        0.09,
        0.6,
    ),
    EvaluationTestCase("half affine", HALF_AFFINE, 0.2, 0.4, -0.5),
    EvaluationTestCase("half sqrt", HALF_SQRT, 0.19, 0.45, -0.25 / 0.9),
    EvaluationTestCase("cayley", CAYLEY, 0.5, 3.0, 8.0),
    EvaluationTestCase(
        "exp",
        {"kind": "exp", "arg": {"kind": "identity"}},
        0.5j,
        complex(math.cos(0.5), math.sin(0.5)),
        complex(math.cos(0.5), math.sin(0.5)),
    ),
    EvaluationTestCase(
        "log of half affine",
        {"kind": "log", "arg": HALF_AFFINE},
        0.5,
        math.log(0.25),
        -2.0,
    ),
    EvaluationTestCase(
        "iterated log of shifted identity",
        {"kind": "gn_compose", "n": 1, "arg": ONE_PLUS_Z},
        0.5,
        math.log(2.5),
        0.4,
    ),
]


@pytest.mark.parametrize("case", evaluation_cases, ids=[case.test_id for case in evaluation_cases])
def test_evaluate_and_derive(case: EvaluationTestCase) -> None:
    f = decode_function(case.data)
    assert evaluate(f, case.z) == pytest.approx(case.value, rel=1e-12)
    assert deriv(f, case.z) == pytest.approx(case.derivative, rel=1e-12)


def test_evaluate_arrays() -> None:
    f = identity() * identity() + 1
    z = np.array([0.0, 0.5, -0.5j])
    assert evaluate(f, z) == pytest.approx(z * z + 1)


@pytest.mark.parametrize("z", [1.0, -1j, 1.5, complex(math.inf, 0.0)])
def test_evaluate_outside_disc(z: complex) -> None:
    with pytest.raises(DomainError):
        evaluate(identity(), z)


def test_arithmetic_folds_constants() -> None:
    f = 2 * (identity() - identity()) + constant(3.0)
    assert evaluate(f, 0.4) == pytest.approx(3.0)
    assert evaluate(identity() ** 3, 0.5) == pytest.approx(0.125)


def test_certification() -> None:
    assert decode_function(HALF_AFFINE).nonvanishing
    assert not identity().nonvanishing
    assert decode_function(HALF_SQRT).singular_angles() == (0.0,)


@pytest.mark.parametrize(
    "build",
    [
        lambda: Power(1.0, 2.0, 0.5),
        lambda: Log(identity()),
        lambda: IterLog(1, identity()),
        lambda: IterLog(-1, constant(1.0)),
        lambda: identity() / identity(),
        lambda: identity() ** -1,
    ],
    ids=[
        "branch point inside",
        "log of identity",
        "iterated log off half plane",
        "negative order",
        "zero divisor",
        "negative power",
    ],
)
def test_rejected_nodes(build: Any) -> None:
    with pytest.raises(InvalidFunctionError):
        build()


def test_exp_is_zero_free() -> None:
    assert Exp(identity()).nonvanishing


@dataclass
class DecodeErrorTestCase:
    test_id: str
    data: Any
    pointer: str


decode_error_cases = [
    DecodeErrorTestCase("not an object", 3, "/function"),
    DecodeErrorTestCase("unknown kind", {"kind": "sine"}, "/function/kind"),
    DecodeErrorTestCase("unknown field", {"kind": "identity", "scale": 2}, "/function/scale"),
    DecodeErrorTestCase("missing field", {"kind": "constant"}, "/function/value"),
    DecodeErrorTestCase("empty terms", {"kind": "sum", "terms": []}, "/function/terms"),
    DecodeErrorTestCase(
        "nested",
        {"kind": "sum", "terms": [{"kind": "identity"}, {"kind": "power", "alpha": "half"}]},
        "/function/terms/1/alpha",
    ),
    DecodeErrorTestCase("branch point", {"kind": "power", "lambda": 2.0, "alpha": 0.5}, "/function"),
    DecodeErrorTestCase("bad order", {"kind": "gn_compose", "n": -1, "arg": CAYLEY}, "/function/n"),
    DecodeErrorTestCase("short samples", {"kind": "outer_samples", "samples": [0.0] * 10}, "/function"),
]


@pytest.mark.parametrize("case", decode_error_cases, ids=[case.test_id for case in decode_error_cases])
def test_decode_errors(case: DecodeErrorTestCase) -> None:
    with pytest.raises(ProblemFileError) as exc_info:
        decode_function(case.data, "/function")
    assert exc_info.value.pointer == case.pointer


def test_encode_keeps_values() -> None:
    f = decode_function(CAYLEY)
    again = decode_function(encode_function(f))
    assert evaluate(again, 0.3 - 0.2j) == pytest.approx(evaluate(f, 0.3 - 0.2j))


@pytest.mark.parametrize(
    "value, expected",
    [(1, 1.0), (0.5, 0.5), ([0.0, 1.0], 1j)],
)
def test_parse_complex(value: Any, expected: complex) -> None:
    assert parse_complex(value, "/z") == expected


@pytest.mark.parametrize("value", [True, "1", [1.0], [1.0, "a"], [math.inf, 0.0]])
def test_parse_complex_rejects(value: Any) -> None:
    with pytest.raises(ProblemFileError) as exc_info:
        parse_complex(value, "/z")
    assert exc_info.value.pointer == "/z"


def _random_disc_points(count: int, radius: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return radius * np.sqrt(rng.uniform(size=count)) * np.exp(2j * math.pi * rng.uniform(size=count))


derivative_corpus = {
    "identity": {"kind": "identity"},
    "half affine": HALF_AFFINE,
    "half sqrt": HALF_SQRT,
    "cayley": CAYLEY,
    "exp": {"kind": "exp", "arg": {"kind": "identity"}},
    "log of half affine": {"kind": "log", "arg": HALF_AFFINE},
    "iterated log": {"kind": "gn_compose", "n": 2, "arg": ONE_PLUS_Z},
}


@pytest.mark.parametrize("data", list(derivative_corpus.values()), ids=list(derivative_corpus))
def test_derivative_matches_central_differences(data: dict[str, Any]) -> None:
    f = decode_function(data)
    z = _random_disc_points(100, 0.9, seed=11)
    step = 1e-5
    central = (evaluate(f, z + step) - evaluate(f, z - step)) / (2.0 * step)
    assert deriv(f, z) == pytest.approx(central, rel=1e-6)
