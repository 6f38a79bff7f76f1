from __future__ import annotations

from typing import Any

import pytest

from harmonic_dirichlet import __version__
from harmonic_dirichlet.cmd import runner
from harmonic_dirichlet.cmd.problem import ProblemFile
from harmonic_dirichlet.core.corpus import HALF_AFFINE, IDENTITY, CorpusCase, corpus_cases, corpus_files
from harmonic_dirichlet.core.exceptions import ProblemFileError
from harmonic_dirichlet.core.quadrature import QuadratureSpec


def _problem(data: dict[str, Any]) -> ProblemFile:
    return ProblemFile.from_dict(data)


def test_poisson() -> None:
    outcome = runner.execute("poisson", _problem({"measure": "lebesgue", "params": {"points": [0.5, [0.3, -0.4]]}}))
    assert outcome.exit_code == runner.EXIT_OK
    assert outcome.result["values"] == pytest.approx([1.0, 1.0])
    assert outcome.result["points"] == [[0.5, 0.0], [0.3, -0.4]]


def test_norm() -> None:
    outcome = runner.execute("norm", _problem({"measure": "lebesgue", "function": HALF_AFFINE}))
    assert outcome.exit_code == runner.EXIT_OK
    assert outcome.result["h2_norm_sq"]["value"] == pytest.approx(0.5, rel=1e-6)
    assert outcome.result["dmu_seminorm_sq"]["value"] == pytest.approx(0.25, rel=1e-6)
    assert outcome.result["dmu_norm_sq"]["value"] == pytest.approx(0.75, rel=1e-6)


def test_localdir_angle() -> None:
    outcome = runner.execute("localdir", _problem({"function": IDENTITY, "params": {"zeta": 0.0}}))
    assert outcome.exit_code == runner.EXIT_OK
    assert outcome.result["value"] == pytest.approx(1.0, rel=1e-6)
    assert outcome.result["boundary_available"]


@pytest.mark.parametrize(
    "params",
    [{"check": "step-bound", "samples": 400, "n_max": 3}, {"check": "log-power", "alpha": 0.5, "samples": 400}],
    ids=["step bound", "log power"],
)
def test_verify_half_plane_checks(params: dict[str, Any]) -> None:
    outcome = runner.execute("verify", _problem({"params": params}))
    assert outcome.exit_code == runner.EXIT_OK
    assert outcome.result["check"] == params["check"]
    assert outcome.result["status"] == "PASS"


def test_figure1() -> None:
    outcome = runner.execute("figure1", _problem({"params": {"samples": 5}}))
    assert outcome.is_table
    assert outcome.header == ("n", "t", "re", "im", "abs", "step_bound_ok")
    assert len(outcome.rows) == 15
    assert outcome.result == {"rows": 15, "step_bound_ok": True}


@pytest.mark.parametrize(
    "command, data, pointer",
    [
        ("integrate", {}, ""),
        ("verify", {"params": {"check": "corpus"}}, "/params/check"),
        ("verify", {"params": {"check": "everything"}}, "/params/check"),
        ("verify", {}, "/params/check"),
        ("poisson", {"params": {"points": [0.0]}}, "/measure"),
    ],
    ids=["unknown command", "nested corpus", "unknown check", "missing check", "missing measure"],
)
def test_execute_input_errors(command: str, data: dict[str, Any], pointer: str) -> None:
    with pytest.raises(ProblemFileError) as exc_info:
        runner.execute(command, _problem(data))
    assert exc_info.value.pointer == pointer


def test_corpus_case_input_error_is_exit_one() -> None:
    case = CorpusCase("broken", "poisson", {"measure": "uniform"}, expect_exit=1)
    outcome = runner.run_corpus_case(case, QuadratureSpec())
    assert outcome.exit_code == runner.EXIT_INPUT_ERROR
    assert outcome.result["reason"].startswith("/measure")


def test_report() -> None:
    outcome = runner.Outcome("norm", {"value": 1.0})
    report = outcome.report(QuadratureSpec())
    assert report["version"] == __version__
    assert report["exit_code"] == 0
    assert report["spec"] == QuadratureSpec().to_dict()


def test_corpus_is_consistent() -> None:
    cases = corpus_cases()
    ids = [case.case_id for case in cases]
    assert ids == sorted(ids)
    assert len(set(ids)) == len(ids)
    assert all(case.command in runner.COMMANDS for case in cases)
    assert len(corpus_files()) == len(cases) + 1


@pytest.mark.asyncio
async def test_sweep_corpus_subset() -> None:
    wanted = {"poisson-lebesgue", "norm-identity-zero", "localdir-identity-1", "verify-log-power-half"}
    cases = [case for case in corpus_cases() if case.case_id in wanted]
    outcome = await runner.sweep_corpus(cases, QuadratureSpec())
    assert outcome.exit_code == runner.EXIT_OK
    assert outcome.result["total"] == len(wanted)
    assert outcome.result["failed"] == []


@pytest.mark.asyncio
async def test_run_off_loop() -> None:
    outcome = await runner.run("poisson", _problem({"measure": "dirac(pi)", "params": {"z": 0.0}}))
    assert outcome.result["values"] == pytest.approx([1.0])
