from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import pytest
from click.testing import CliRunner

from harmonic_dirichlet.cmd.cli import cli
from harmonic_dirichlet.core.corpus import CORPUS_INDEX, corpus_cases


@pytest.fixture
def cli_runner() -> CliRunner:
    return CliRunner()


def _write(path: Path, data: object) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_help(cli_runner: CliRunner) -> None:
    result = cli_runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "--seed-corpus" in result.output


def test_missing_command(cli_runner: CliRunner) -> None:
    assert cli_runner.invoke(cli, []).exit_code == 1


def test_missing_problem(cli_runner: CliRunner) -> None:
    assert cli_runner.invoke(cli, ["poisson"]).exit_code == 1


def test_poisson_report(cli_runner: CliRunner, tmp_path: Path) -> None:
    problem = _write(tmp_path / "problem.json", {"measure": "lebesgue", "params": {"points": [0.5, [0.0, 0.5]]}})
    out = tmp_path / "report.json"
    result = cli_runner.invoke(cli, ["poisson", "--problem", problem, "--out", str(out)])
    assert result.exit_code == 0

    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["command"] == "poisson"
    assert report["exit_code"] == 0
    assert report["result"]["values"] == pytest.approx([1.0, 1.0])


def test_invalid_problem(cli_runner: CliRunner, tmp_path: Path) -> None:
    problem = _write(tmp_path / "problem.json", {"measure": "lebesgue", "extra": True})
    result = cli_runner.invoke(cli, ["poisson", "--problem", problem])
    assert result.exit_code == 1


def test_seed_corpus(cli_runner: CliRunner, tmp_path: Path) -> None:
    target = tmp_path / "corpus"
    result = cli_runner.invoke(cli, ["--seed-corpus", str(target)])
    assert result.exit_code == 0

    index = json.loads((target / CORPUS_INDEX).read_text(encoding="utf-8"))
    assert len(index["cases"]) == len(corpus_cases())
    first = index["cases"][0]
    assert (target / first["problem"]).exists()


@dataclass
class InputErrorTestCase:
    test_id: str
    args: list[str]


input_error_cases = [
    InputErrorTestCase("unknown command", ["integrate"]),
    InputErrorTestCase("unknown option", ["poisson", "--precision", "3"]),
    InputErrorTestCase("missing problem file", ["poisson", "--problem", "does-not-exist.json"]),
    InputErrorTestCase("missing spec file", ["figure1", "--spec", "does-not-exist.json"]),
]


@pytest.mark.parametrize("case", input_error_cases, ids=[case.test_id for case in input_error_cases])
def test_input_errors_exit_with_one(cli_runner: CliRunner, tmp_path: Path, case: InputErrorTestCase) -> None:
    args = [str(tmp_path / arg) if arg.endswith(".json") else arg for arg in case.args]
    assert cli_runner.invoke(cli, args).exit_code == 1


def test_problem_not_utf8(cli_runner: CliRunner, tmp_path: Path) -> None:
    problem = tmp_path / "problem.json"
    problem.write_bytes(b'{"measure": "\xe9"}')
    result = cli_runner.invoke(cli, ["poisson", "--problem", str(problem)])
    assert result.exit_code == 1
    assert isinstance(result.exception, SystemExit)
