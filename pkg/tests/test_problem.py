from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import pytest

from harmonic_dirichlet.cmd.problem import ProblemFile, load_spec, parse_zeta, read_json
from harmonic_dirichlet.core.corpus import HALF_AFFINE
from harmonic_dirichlet.core.exceptions import ProblemFileError
from harmonic_dirichlet.core.functions import evaluate
from harmonic_dirichlet.core.quadrature import QuadratureSpec

DOCUMENT = {
    "measure": "dirac(pi)",
    "function": HALF_AFFINE,
    "quadrature": {"angular_nodes": 256},
    "params": {"zeta": [-1.0, 0.0], "n": 2, "c": 1, "points": [0.5, [0.0, 0.5]], "g": {"kind": "identity"}},
}


def test_from_dict() -> None:
    problem = ProblemFile.from_dict(DOCUMENT)
    assert problem.spec.angular_nodes == 256
    assert problem.measure is not None
    assert problem.measure.singular_angles == pytest.approx((math.pi,))
    assert problem.params.points == (0.5, 0.5j)
    assert problem.params.zeta == -1.0
    assert problem.params.n == 2
    assert problem.params.c == 1.0
    assert evaluate(problem.require_function(), 0.2) == pytest.approx(0.4)
    assert evaluate(problem.require_function("g"), 0.2) == pytest.approx(0.2)
    assert problem.require_function("h") is problem.function


def test_spec_override_wins() -> None:
    spec = QuadratureSpec(angular_nodes=128)
    assert ProblemFile.from_dict(DOCUMENT, spec).spec is spec


@pytest.mark.parametrize(
    "value, expected",
    [(0.0, 1.0), (math.pi, -1.0), (0.5 * math.pi, 1j), ([0.0, -1.0], -1j)],
)
def test_parse_zeta(value: Any, expected: complex) -> None:
    assert parse_zeta(value, "/params/zeta") == pytest.approx(expected)


@dataclass
class ProblemErrorTestCase:
    test_id: str
    data: Any
    pointer: str


problem_error_cases = [
    ProblemErrorTestCase("not an object", [], ""),
    ProblemErrorTestCase("unknown key", {"measures": "lebesgue"}, "/measures"),
    ProblemErrorTestCase("unknown param", {"params": {"tol": 1e-6}}, "/params/tol"),
    ProblemErrorTestCase("params not an object", {"params": [1]}, "/params"),
    ProblemErrorTestCase("float order", {"params": {"n": 2.0}}, "/params/n"),
    ProblemErrorTestCase("string constant", {"params": {"c": "one"}}, "/params/c"),
    ProblemErrorTestCase("bad point", {"params": {"points": [0.5, "i"]}}, "/params/points/1"),
    ProblemErrorTestCase("bad zeta", {"params": {"zeta": "north"}}, "/params/zeta"),
    ProblemErrorTestCase("bad slot function", {"params": {"h": {"kind": "sine"}}}, "/params/h/kind"),
    ProblemErrorTestCase("bad quadrature", {"quadrature": {"workers": "many"}}, "/quadrature/workers"),
    ProblemErrorTestCase("bad measure", {"measure": 1}, "/measure"),
]


@pytest.mark.parametrize("case", problem_error_cases, ids=[case.test_id for case in problem_error_cases])
def test_from_dict_errors(case: ProblemErrorTestCase) -> None:
    with pytest.raises(ProblemFileError) as exc_info:
        ProblemFile.from_dict(case.data)
    assert exc_info.value.pointer == case.pointer


def test_required_fields() -> None:
    problem = ProblemFile.from_dict({})
    with pytest.raises(ProblemFileError) as exc_info:
        problem.params.require("zeta")
    assert exc_info.value.pointer == "/params/zeta"

    with pytest.raises(ProblemFileError) as exc_info:
        problem.require_measure()
    assert exc_info.value.pointer == "/measure"

    with pytest.raises(ProblemFileError) as exc_info:
        problem.require_function("g")
    assert exc_info.value.pointer == "/params/g"


@pytest.mark.asyncio
async def test_load(tmp_path: Path) -> None:
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(DOCUMENT), encoding="utf-8")
    problem = await ProblemFile.load(path)
    assert problem.params.n == 2


@pytest.mark.asyncio
async def test_read_json_invalid(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{"measure": ', encoding="utf-8")
    with pytest.raises(ProblemFileError) as exc_info:
        await read_json(path)
    assert exc_info.value.pointer == ""
    assert "invalid JSON" in exc_info.value.reason


@pytest.mark.asyncio
async def test_read_json_missing_file(tmp_path: Path) -> None:
    with pytest.raises(ProblemFileError) as exc_info:
        await read_json(tmp_path / "missing.json")
    assert exc_info.value.reason.startswith("cannot read")


@pytest.mark.asyncio
async def test_load_spec(tmp_path: Path) -> None:
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"rel_tol": 1e-6, "workers": 2}), encoding="utf-8")
    spec = await load_spec(path)
    assert spec.rel_tol == 1e-6
    assert spec.workers == 2


@pytest.mark.asyncio
async def test_read_json_not_utf8(tmp_path: Path) -> None:
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"measure": "\xe9"}')
    with pytest.raises(ProblemFileError) as exc_info:
        await read_json(path)
    assert exc_info.value.pointer == ""
    assert "not UTF-8" in exc_info.value.reason
