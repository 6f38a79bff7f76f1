from __future__ import annotations

import asyncio
import functools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from harmonic_dirichlet import __version__
from harmonic_dirichlet.cmd.problem import ProblemFile
from harmonic_dirichlet.core.certify.certificates import certify_growth, certify_iterlog, certify_log
from harmonic_dirichlet.core.certify.inequalities import (
    DEFAULT_HALF_PLANE_SAMPLES,
    DEFAULT_STEP_ORDERS,
    verify_cutoff,
    verify_gn_bound,
    verify_h1h2,
    verify_herglotz_growth,
    verify_iterlog_monotonicity,
    verify_log_power_bound,
    verify_norm_ineq,
    verify_step_bound,
)
from harmonic_dirichlet.core.certify.models import Certificate, InequalityReport
from harmonic_dirichlet.core.corpus import CorpusCase, corpus_cases
from harmonic_dirichlet.core.dirichlet import dmu_seminorm_sq, h2_norm_sq, local_dirichlet_boundary
from harmonic_dirichlet.core.exceptions import (
    DivergenceError,
    DomainError,
    InvalidFunctionError,
    InvalidMeasureError,
    InvalidQuadratureSpecError,
    InvalidSamplesError,
    NonFiniteSampleError,
    NotOuterError,
    ProblemFileError,
    ValidationError,
)
from harmonic_dirichlet.core.iterlog import CURVE_HEADER, DEFAULT_FIGURE_SAMPLES, figure1_rows
from harmonic_dirichlet.core.measure import poisson_integral, total_mass
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec
from harmonic_dirichlet.core.sweep import OnSweepStartCallback, Sweep, SweepCase, SweepProgressCallback

log = logging.getLogger(__name__)

COMMANDS: tuple[str, ...] = (
    "poisson",
    "norm",
    "localdir",
    "certify-log",
    "certify-iterlog",
    "certify-growth",
    "verify",
    "figure1",
)

VERIFY_CHECKS: tuple[str, ...] = (
    "h1h2",
    "cutoff",
    "norm",
    "gn-bound",
    "herglotz",
    "step-bound",
    "log-power",
    "monotone",
    "corpus",
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2

INPUT_ERRORS = (
    ProblemFileError,
    DomainError,
    InvalidMeasureError,
    InvalidFunctionError,
    InvalidSamplesError,
    InvalidQuadratureSpecError,
    NotOuterError,
)
"""Errors caused by the problem's data. They map to exit code 1."""

NUMERICAL_FAILURES = (DivergenceError, NonFiniteSampleError, ValidationError)
"""Errors of a computation that ran on valid data but did not settle. They map to exit code 2."""


@dataclass(frozen=True)
class Outcome:
    """
    Result of one command.

    Attributes:
        command     : The command that ran.
        result      : JSON-ready result body.
        exit_code   : 0 on success, 2 when the outcome is inconclusive, 1 for input errors.
        header      : CSV header, set by commands that emit tables.
        rows        : CSV rows.
    """

    command: str
    result: Mapping[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK
    header: tuple[str, ...] = ()
    rows: tuple[Sequence[Any], ...] = ()

    @property
    def is_table(self) -> bool:
        return bool(self.header)

    def report(self, spec: QuadratureSpec) -> dict[str, Any]:
        """The JSON report: result body plus the version and the spec it was computed with."""
        return {
            "command": self.command,
            "version": __version__,
            "spec": spec.to_dict(),
            "exit_code": self.exit_code,
            "result": dict(self.result),
        }


def _exit_code(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_INCONCLUSIVE


def _poisson(problem: ProblemFile) -> Outcome:
    mu = problem.require_measure()
    points = np.array(problem.params.require("points"), dtype=complex)
    values = poisson_integral(mu, points, problem.spec)
    result = {
        "measure": mu.to_dict(),
        "points": [[z.real, z.imag] for z in points.tolist()],
        "values": [float(v) for v in values],
        "total_mass": total_mass(mu, problem.spec),
    }
    return Outcome("poisson", result)


def _norm(problem: ProblemFile) -> Outcome:
    f = problem.require_function()
    mu = problem.require_measure()
    h2 = h2_norm_sq(f, problem.spec)
    seminorm = dmu_seminorm_sq(f, mu, problem.spec)
    total = h2 + seminorm
    result = {"h2_norm_sq": h2.to_dict(), "dmu_seminorm_sq": seminorm.to_dict(), "dmu_norm_sq": total.to_dict()}
    return Outcome("norm", result, _exit_code(total.converged))


def _localdir(problem: ProblemFile) -> Outcome:
    f = problem.require_function()
    local = local_dirichlet_boundary(f, problem.params.require("zeta"), problem.spec)
    ok = local.area.converged and local.boundary_available and local.boundary_converged
    result = {**local.to_dict(), "value": local.value, "agreement": local.agreement}
    return Outcome("localdir", result, _exit_code(ok))


def _certificate(command: str, certificate: Certificate, ok: bool) -> Outcome:
    log.info("%s verdict: %s", command, certificate.verdict)
    return Outcome(command, certificate.to_dict(), _exit_code(ok))


def _certify_log(problem: ProblemFile) -> Outcome:
    certificate = certify_log(problem.require_function("g"), problem.require_measure(), problem.spec)
    return _certificate("certify-log", certificate, certificate.sufficient)


def _certify_iterlog(problem: ProblemFile) -> Outcome:
    g = problem.require_function("g")
    certificate = certify_iterlog(g, problem.require_measure(), problem.params.require("n"), problem.spec)
    return _certificate("certify-iterlog", certificate, certificate.sufficient)


def _certify_growth(problem: ProblemFile) -> Outcome:
    certificate = certify_growth(problem.require_function("g"), problem.params.require("n"), problem.spec)
    return _certificate("certify-growth", certificate, certificate.applies_equivalences)


def _check_h1h2(problem: ProblemFile) -> InequalityReport:
    params = problem.params
    return verify_h1h2(
        problem.require_function("g"),
        problem.require_function("h1"),
        problem.require_function("h2"),
        params.require("zeta"),
        params.require("c"),
        problem.spec,
    )


def _check_cutoff(problem: ProblemFile) -> InequalityReport:
    params = problem.params
    return verify_cutoff(problem.require_function("h"), params.require("zeta"), params.require("n"), problem.spec)


def _check_norm(problem: ProblemFile) -> InequalityReport:
    return verify_norm_ineq(
        problem.require_function("g"),
        problem.require_function("h"),
        problem.require_measure(),
        problem.params.require("n"),
        problem.spec,
    )


def _check_gn_bound(problem: ProblemFile) -> InequalityReport:
    return verify_gn_bound(problem.require_function("f"), problem.params.require("n_max"), problem.spec)


def _check_herglotz(problem: ProblemFile) -> InequalityReport:
    return verify_herglotz_growth(problem.require_function("f"), problem.spec)


def _check_step_bound(problem: ProblemFile) -> InequalityReport:
    params = problem.params
    samples = DEFAULT_HALF_PLANE_SAMPLES if params.samples is None else params.samples
    n_max = DEFAULT_STEP_ORDERS if params.n_max is None else params.n_max
    return verify_step_bound(samples, n_max)


def _check_log_power(problem: ProblemFile) -> InequalityReport:
    params = problem.params
    samples = DEFAULT_HALF_PLANE_SAMPLES if params.samples is None else params.samples
    return verify_log_power_bound(params.require("alpha"), samples)


def _check_monotone(problem: ProblemFile) -> InequalityReport:
    params = problem.params
    return verify_iterlog_monotonicity(
        problem.require_function("g"),
        problem.require_measure(),
        params.require("n"),
        params.require("k"),
        problem.spec,
    )


_CHECKS: dict[str, Callable[[ProblemFile], InequalityReport]] = {
    "h1h2": _check_h1h2,
    "cutoff": _check_cutoff,
    "norm": _check_norm,
    "gn-bound": _check_gn_bound,
    "herglotz": _check_herglotz,
    "step-bound": _check_step_bound,
    "log-power": _check_log_power,
    "monotone": _check_monotone,
}


def _verify(problem: ProblemFile) -> Outcome:
    check = problem.params.require("check")
    if check == "corpus":
        raise ProblemFileError(pointer="/params/check", reason="the corpus sweep cannot be nested")
    if check not in _CHECKS:
        expected = ", ".join(VERIFY_CHECKS)
        raise ProblemFileError(pointer="/params/check", reason=f"unknown check {check!r}, expected one of {expected}")
    report = _CHECKS[check](problem)
    log.info("verify %s: %s %s", check, report.status, report.reason)
    return Outcome("verify", {"check": check, **report.to_dict()}, _exit_code(report.passed))


def _figure1(problem: ProblemFile) -> Outcome:
    samples = DEFAULT_FIGURE_SAMPLES if problem.params.samples is None else problem.params.samples
    if samples < 2:
        raise DomainError(value=samples, constraint="samples >= 2")
    rows = figure1_rows(samples=samples)
    ok = all(row.step_bound_ok for row in rows)
    result = {"rows": len(rows), "step_bound_ok": ok}
    return Outcome("figure1", result, _exit_code(ok), header=CURVE_HEADER, rows=tuple(row.as_csv() for row in rows))


_HANDLERS: dict[str, Callable[[ProblemFile], Outcome]] = {
    "poisson": _poisson,
    "norm": _norm,
    "localdir": _localdir,
    "certify-log": _certify_log,
    "certify-iterlog": _certify_iterlog,
    "certify-growth": _certify_growth,
    "verify": _verify,
    "figure1": _figure1,
}


def execute(command: str, problem: ProblemFile) -> Outcome:
    """
    Runs a command synchronously. Computations that do not settle give an exit code 2 outcome carrying the reason.

    Raises:
        ProblemFileError: For unknown commands, checks and missing parameters.
        DomainError     : And the other input errors, for invalid data in the problem.
    """
    handler = _HANDLERS.get(command)
    if handler is None:
        raise ProblemFileError(pointer="", reason=f"unknown command {command!r}")
    try:
        return handler(problem)
    except NUMERICAL_FAILURES as exc:
        log.info("%s did not settle: %s", command, exc)
        return Outcome(command, {"reason": str(exc)}, EXIT_INCONCLUSIVE)


def run_corpus_case(case: CorpusCase, spec: QuadratureSpec) -> Outcome:
    """Runs one corpus case. Input errors become exit code 1 outcomes instead of aborting the sweep."""
    try:
        return execute(case.command, ProblemFile.from_dict(case.problem, spec))
    except INPUT_ERRORS as exc:
        return Outcome(case.command, {"reason": str(exc)}, EXIT_INPUT_ERROR)


async def sweep_corpus(
    cases: Sequence[CorpusCase],
    spec: QuadratureSpec,
    progress_callback: SweepProgressCallback | None = None,
    on_sweep_started: OnSweepStartCallback | None = None,
) -> Outcome:
    """
    Runs corpus cases concurrently and compares each exit code with the expected one.

    Args:
        cases               : Cases to run.
        spec                : Quadrature specification shared by every case.
        progress_callback   : Optional per-case progress callback.
        on_sweep_started    : Optional callback receiving the number of cases.
    """
    sweep: Sweep[Outcome] = Sweep(spec.workers, progress_callback, on_sweep_started)
    checks = [SweepCase(case.case_id, functools.partial(run_corpus_case, case, spec)) for case in cases]
    results = await sweep.run(checks)

    expected = {case.case_id: case.expect_exit for case in cases}
    entries = []
    for result in results:
        outcome = result.value
        entries.append({
            "id": result.case_id,
            "command": outcome.command,
            "exit_code": outcome.exit_code,
            "expect_exit": expected[result.case_id],
            "passed": outcome.exit_code == expected[result.case_id],
            "reason": outcome.result.get("reason", ""),
        })
    failed = [entry["id"] for entry in entries if not entry["passed"]]
    summary = {"check": "corpus", "cases": entries, "total": len(entries), "failed": failed}
    return Outcome("verify", summary, _exit_code(not failed))


async def run(
    command: str,
    problem: ProblemFile,
    progress_callback: SweepProgressCallback | None = None,
    on_sweep_started: OnSweepStartCallback | None = None,
) -> Outcome:
    """
    Runs a command off the event loop. `verify` with the `corpus` check sweeps the built-in corpus.

    Args:
        command             : One of COMMANDS.
        problem             : Validated problem file.
        progress_callback   : Optional per-case progress callback of the corpus sweep.
        on_sweep_started    : Optional callback receiving the number of corpus cases.
    """
    if command == "verify" and problem.params.check == "corpus":
        return await sweep_corpus(corpus_cases(), problem.spec, progress_callback, on_sweep_started)

    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(None, execute, command, problem)
