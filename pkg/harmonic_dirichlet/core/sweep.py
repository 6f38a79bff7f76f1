from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass, field
from typing import Awaitable, Callable, Generic, Literal, Sequence, TypeVar

from typing_extensions import TypeAlias

from harmonic_dirichlet.core.exceptions import DomainError, SweepError
from harmonic_dirichlet.core.quadrature.options import DEFAULT_WORKERS

log = logging.getLogger(__name__)

T = TypeVar("T")

SweepProgressType: TypeAlias = Literal["Start", "Completed"]
"""
Type of progress being reported.
"""

SweepProgressCallback: TypeAlias = Callable[[str, SweepProgressType], Awaitable[None]]
"""
Progress callback called when a check starts and when it completes. Takes the case id and the progress type.
"""

OnSweepStartCallback: TypeAlias = Callable[[int], Awaitable[None]]
"""
Callback called once the number of checks is known.
"""


@dataclass(frozen=True)
class SweepCase(Generic[T]):
    """
    A named synchronous check.

    Attributes:
        case_id : Identifier used for ordering and error reports.
        check   : Callable doing the work; runs in an executor thread.
    """

    case_id: str
    check: Callable[[], T]


@dataclass(frozen=True)
class SweepResult(Generic[T]):
    case_id: str
    value: T


@dataclass
class Sweep(Generic[T]):
    """
    Runs independent checks concurrently.

    Attributes:
        workers             : Number of checks running at the same time.
        progress_callback   : Optional callback reporting the progress of each check.
        on_sweep_started    : Optional callback called with the number of checks before any of them starts.
    """

    workers: int = DEFAULT_WORKERS
    progress_callback: SweepProgressCallback | None = None
    on_sweep_started: OnSweepStartCallback | None = None

    _semaphore: asyncio.Semaphore = field(init=False)

    def __post_init__(self) -> None:
        if isinstance(self.workers, bool) or not isinstance(self.workers, int) or self.workers < 1:
            raise DomainError(value=self.workers, constraint="workers >= 1")
        self._semaphore = asyncio.Semaphore(self.workers)

    async def run(self, cases: Sequence[SweepCase[T]]) -> list[SweepResult[T]]:
        """
        Runs every case and returns the results ordered by case id, whatever order they finished in.

        Raises:
            SweepError: For the first check that raised.
        """
        if self.on_sweep_started:
            await self.on_sweep_started(len(cases))

        tasks = [self._create_task(case) for case in cases]
        results = await asyncio.gather(*tasks, return_exceptions=False)
        return sorted(results, key=lambda result: result.case_id)

    async def run_case(self, case: SweepCase[T]) -> SweepResult[T]:
        """
        Runs a single case under the concurrency limit.

        Raises:
            SweepError: Wrapping whatever the check raised.
        """
        try:
            async with self._semaphore:
                return await self._run(case)
        except Exception as exc:
            raise SweepError(case=case.case_id, cause=exc) from exc

    async def _run(self, case: SweepCase[T]) -> SweepResult[T]:
        await self._report_progress(case.case_id, "Start")
        log.debug('Running check "%s"', case.case_id)
        loop = asyncio.get_running_loop()
        value = await loop.run_in_executor(None, case.check)
        log.debug('Finished check "%s"', case.case_id)
        await self._report_progress(case.case_id, "Completed")
        return SweepResult(case.case_id, value)

    def _create_task(self, case: SweepCase[T]) -> asyncio.Task:
        async def _task() -> SweepResult[T]:
            return await self.run_case(case)

        return asyncio.create_task(_task())

    async def _report_progress(self, case_id: str, progress_type: SweepProgressType) -> None:
        if not self.progress_callback:
            return
        await self.progress_callback(case_id, progress_type)
