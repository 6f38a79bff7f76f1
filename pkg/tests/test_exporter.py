from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from harmonic_dirichlet.core.exporter import ReportExporter, encode_value, render_csv, render_json


def test_encode_value() -> None:
    encoded = encode_value({
        "finite": np.float64(0.5),
        "infinite": math.inf,
        "negative": -math.inf,
        "nan": math.nan,
        "complex": 1 - 2j,
        "array": np.array([1, 2]),
        "flag": np.bool_(True),
        "nested": ({"count": np.int64(3)},),
    })
    assert encoded == {
        "finite": 0.5,
        "infinite": "inf",
        "negative": "-inf",
        "nan": "nan",
        "complex": [1.0, -2.0],
        "array": [1, 2],
        "flag": True,
        "nested": [{"count": 3}],
    }


def test_render_json_is_sorted() -> None:
    text = render_json({"b": 1, "a": {"d": 2, "c": math.inf}})
    assert text.index('"a"') < text.index('"b"')
    assert text.index('"c"') < text.index('"d"')
    assert json.loads(text)["a"]["c"] == "inf"


def test_render_csv() -> None:
    assert render_csv(("n", "ok"), [[1, "true"], [2, "false"]]) == "n,ok\n1,true\n2,false\n"


@pytest.mark.asyncio
async def test_write_json_to_file(tmp_path: Path) -> None:
    dest = tmp_path / "reports" / "report.json"
    await ReportExporter(dest).write_json({"value": 0.25})
    assert json.loads(dest.read_text(encoding="utf-8")) == {"value": 0.25}


@pytest.mark.asyncio
async def test_write_csv_to_stdout(capsys: pytest.CaptureFixture[str]) -> None:
    await ReportExporter().write_csv(("t", "abs"), [["0.5", "1.0"]])
    assert capsys.readouterr().out == "t,abs\n0.5,1.0\n"


@pytest.mark.asyncio
async def test_write_files(tmp_path: Path) -> None:
    written = await ReportExporter().write_files(tmp_path / "corpus", {"a.json": {"x": 1}, "b.json": {"y": [1, 2]}})
    assert [path.name for path in written] == ["a.json", "b.json"]
    assert json.loads((tmp_path / "corpus" / "b.json").read_text(encoding="utf-8")) == {"y": [1, 2]}
