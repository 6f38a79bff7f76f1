"""
Built-in problem corpus.

Each case is a problem file together with the command it is meant for and the exit code that command must
return. `--seed-corpus` writes the cases out as problem files and the `corpus` verification sweeps them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from harmonic_dirichlet.core.quadrature.rules import TWO_PI

CORPUS_INDEX = "corpus.json"
"""Name of the index file written next to the seeded problem files."""

ONE = {"kind": "constant", "value": 1.0}
IDENTITY = {"kind": "identity"}
SQUARE = {"kind": "product", "terms": [IDENTITY, IDENTITY]}
HALF_AFFINE = {"kind": "power", "scale": 0.5, "lambda": 1.0, "alpha": 1.0}
"""(1 - z)/2"""
HALF_SQRT = {"kind": "power", "scale": 0.5, "lambda": 1.0, "alpha": 0.5}
"""(1 - z)^(1/2)/2"""
HALF_SHIFTED = {"kind": "power", "scale": 0.5, "lambda": -1.0, "alpha": 1.0}
"""(1 + z)/2"""
CAYLEY = {
    "kind": "quotient",
    "numerator": {"kind": "sum", "terms": [ONE, IDENTITY]},
    "denominator": {"kind": "power", "lambda": 1.0, "alpha": 1.0},
}
"""(1 + z)/(1 - z), a Herglotz function with f(0) = 1."""

MEASURES: dict[str, Any] = {
    "lebesgue": "lebesgue",
    "atom-pi": "dirac(pi)",
    "atoms-0-pi": {"atoms": [{"angle": 0.0, "mass": TWO_PI}, {"angle": "pi", "mass": TWO_PI}]},
}

MINUS_ONE = [-1.0, 0.0]


def cutoff_node(h: Mapping[str, Any], n: int) -> dict[str, Any]:
    """JSON tree of the outer minimum h ^ n h^2."""
    square = {"kind": "product", "terms": [h, h]}
    return {"kind": "outer_min", "left": h, "right": {"kind": "scale", "factor": float(n), "arg": square}}


@dataclass(frozen=True)
class CorpusCase:
    """
    A problem file with the command it runs under.

    Attributes:
        case_id     : Unique id, also the file stem when seeded.
        command     : CLI command the problem is meant for.
        problem     : Problem file content.
        expect_exit : Exit code the command must return.
    """

    case_id: str
    command: str
    problem: Mapping[str, Any] = field(default_factory=dict)
    expect_exit: int = 0

    @property
    def filename(self) -> str:
        return f"{self.case_id}.json"

    def to_index(self) -> dict[str, Any]:
        return {"id": self.case_id, "command": self.command, "problem": self.filename, "expect_exit": self.expect_exit}


def _poisson_cases() -> list[CorpusCase]:
    points = [0.5, [0.3, -0.4], 0.0, [-0.7, 0.7]]
    return [
        CorpusCase("poisson-lebesgue", "poisson", {"measure": "lebesgue", "params": {"points": points}}),
        CorpusCase("poisson-atom-pi", "poisson", {"measure": "dirac(pi)", "params": {"points": points}}),
    ]


def _norm_cases() -> list[CorpusCase]:
    return [
        CorpusCase("norm-half-affine-lebesgue", "norm", {"measure": "lebesgue", "function": HALF_AFFINE}),
        CorpusCase("norm-half-affine-atom-pi", "norm", {"measure": "dirac(pi)", "function": HALF_AFFINE}),
        CorpusCase("norm-identity-zero", "norm", {"measure": "zero", "function": IDENTITY}),
    ]


def _localdir_cases() -> list[CorpusCase]:
    return [
        CorpusCase("localdir-identity-1", "localdir", {"function": IDENTITY, "params": {"zeta": 0.0}}),
        CorpusCase("localdir-square-i", "localdir", {"function": SQUARE, "params": {"zeta": [0.0, 1.0]}}),
        CorpusCase(
            "localdir-half-affine-minus-1", "localdir", {"function": HALF_AFFINE, "params": {"zeta": MINUS_ONE}}
        ),
    ]


def _certificate_cases() -> list[CorpusCase]:
    return [
        CorpusCase("certify-log-one-lebesgue", "certify-log", {"measure": "lebesgue", "function": ONE}),
        CorpusCase(
            "certify-log-half-affine-lebesgue",
            "certify-log",
            {"measure": "lebesgue", "function": HALF_AFFINE},
            expect_exit=2,
        ),
        CorpusCase("certify-log-half-affine-atom-pi", "certify-log", {"measure": "dirac(pi)", "function": HALF_AFFINE}),
        CorpusCase(
            "certify-iterlog-half-affine-n0",
            "certify-iterlog",
            {"measure": "lebesgue", "function": HALF_AFFINE, "params": {"n": 0}},
            expect_exit=2,
        ),
        CorpusCase(
            "certify-iterlog-half-affine-n2",
            "certify-iterlog",
            {"measure": "lebesgue", "function": HALF_AFFINE, "params": {"n": 2}},
        ),
        CorpusCase("certify-growth-half-affine-n2", "certify-growth", {"function": HALF_AFFINE, "params": {"n": 2}}),
    ]


def _local_inequality_cases() -> list[CorpusCase]:
    cases = [
        CorpusCase(
            "verify-h1h2-one",
            "verify",
            {"params": {"check": "h1h2", "g": ONE, "h1": HALF_AFFINE, "h2": HALF_AFFINE, "zeta": MINUS_ONE, "c": 1.0}},
        ),
        CorpusCase(
            "verify-h1h2-cutoff",
            "verify",
            {
                "params": {
                    "check": "h1h2",
                    "g": HALF_SHIFTED,
                    "h1": cutoff_node(HALF_AFFINE, 2),
                    "h2": HALF_AFFINE,
                    "zeta": MINUS_ONE,
                    "c": 4.0,
                }
            },
        ),
        CorpusCase(
            "verify-h1h2-shifted",
            "verify",
            {
                "params": {
                    "check": "h1h2",
                    "g": HALF_AFFINE,
                    "h1": HALF_SHIFTED,
                    "h2": HALF_SHIFTED,
                    "zeta": [1.0, 0.0],
                    "c": 1.0,
                }
            },
        ),
    ]
    for name, h in (("half-affine", HALF_AFFINE), ("half-sqrt", HALF_SQRT)):
        cases.extend(
            CorpusCase(
                f"verify-cutoff-{name}-n{n:03d}",
                "verify",
                {"params": {"check": "cutoff", "h": h, "zeta": MINUS_ONE, "n": n}},
            )
            for n in (1, 2, 10, 100)
        )
    return cases


def _norm_inequality_cases() -> list[CorpusCase]:
    pairs = (("one-half-affine", ONE, HALF_AFFINE, 2), ("half-affine-half-affine", HALF_AFFINE, HALF_AFFINE, 10))
    return [
        CorpusCase(
            f"verify-norm-{pair}-{measure_name}",
            "verify",
            {"measure": measure, "params": {"check": "norm", "g": g, "h": h, "n": n}},
        )
        for pair, g, h, n in pairs
        for measure_name, measure in MEASURES.items()
    ]


def _iterlog_cases() -> list[CorpusCase]:
    return [
        CorpusCase("verify-gn-bound-cayley", "verify", {"params": {"check": "gn-bound", "f": CAYLEY, "n_max": 4}}),
        CorpusCase("verify-gn-bound-one", "verify", {"params": {"check": "gn-bound", "f": ONE, "n_max": 4}}),
        CorpusCase("verify-herglotz-cayley", "verify", {"params": {"check": "herglotz", "f": CAYLEY}}),
        CorpusCase("verify-step-bound", "verify", {"params": {"check": "step-bound", "n_max": 6}}),
        CorpusCase("verify-log-power-half", "verify", {"params": {"check": "log-power", "alpha": 0.5}}),
        CorpusCase(
            "verify-monotone-half-affine-atom-pi",
            "verify",
            {"measure": "dirac(pi)", "function": HALF_AFFINE, "params": {"check": "monotone", "n": 1, "k": 2}},
        ),
        CorpusCase("figure1-curves", "figure1"),
    ]


def corpus_cases() -> list[CorpusCase]:
    """Every built-in case, ordered by id."""
    cases = [
        *_poisson_cases(),
        *_norm_cases(),
        *_localdir_cases(),
        *_certificate_cases(),
        *_local_inequality_cases(),
        *_norm_inequality_cases(),
        *_iterlog_cases(),
    ]
    return sorted(cases, key=lambda case: case.case_id)


def corpus_files(cases: list[CorpusCase] | None = None) -> dict[str, Mapping[str, Any]]:
    """The seeded directory content: one problem file per case plus the index."""
    cases = corpus_cases() if cases is None else cases
    files: dict[str, Mapping[str, Any]] = {case.filename: case.problem for case in cases}
    files[CORPUS_INDEX] = {"cases": [case.to_index() for case in cases]}
    return files
