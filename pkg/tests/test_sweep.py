from __future__ import annotations

import time

import pytest

from harmonic_dirichlet.core.exceptions import DomainError, SweepError
from harmonic_dirichlet.core.sweep import Sweep, SweepCase, SweepProgressType


def _sleeper(value: int, delay: float) -> SweepCase[int]:
    def check() -> int:
        time.sleep(delay)
        return value

    return SweepCase(f"case-{value}", check)


@pytest.mark.asyncio
async def test_results_are_ordered_by_case_id() -> None:
    sweep: Sweep[int] = Sweep(workers=3)
    results = await sweep.run([_sleeper(3, 0.0), _sleeper(1, 0.05), _sleeper(2, 0.02)])
    assert [result.case_id for result in results] == ["case-1", "case-2", "case-3"]
    assert [result.value for result in results] == [1, 2, 3]


@pytest.mark.asyncio
async def test_progress_callbacks() -> None:
    events: list[tuple[str, SweepProgressType]] = []
    totals: list[int] = []

    async def on_progress(case_id: str, progress_type: SweepProgressType) -> None:
        events.append((case_id, progress_type))

    async def on_started(total: int) -> None:
        totals.append(total)

    sweep: Sweep[int] = Sweep(workers=1, progress_callback=on_progress, on_sweep_started=on_started)
    await sweep.run([_sleeper(1, 0.0), _sleeper(2, 0.0)])
    assert totals == [2]
    assert sorted(events) == [
        ("case-1", "Completed"),
        ("case-1", "Start"),
        ("case-2", "Completed"),
        ("case-2", "Start"),
    ]


@pytest.mark.asyncio
async def test_failing_check() -> None:
    def check() -> int:
        raise ValueError("no convergence")

    sweep: Sweep[int] = Sweep(workers=2)
    with pytest.raises(SweepError) as exc_info:
        await sweep.run([SweepCase("broken", check)])
    assert str(exc_info.value) == 'Check "broken" failed => no convergence'
    assert isinstance(exc_info.value.cause, ValueError)


@pytest.mark.parametrize("workers", [0, -1, True])
def test_workers_must_be_positive(workers: int) -> None:
    with pytest.raises(DomainError):
        Sweep(workers=workers)
