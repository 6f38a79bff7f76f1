from __future__ import annotations

from dataclasses import dataclass

from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    ProgressColumn,
    SpinnerColumn,
    Task,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
)
from rich.text import Text

from harmonic_dirichlet.core.sweep import SweepProgressType


class CheckRateColumn(ProgressColumn):
    """Renders the number of completed checks per minute."""

    def render(self, task: Task) -> Text:
        speed = task.finished_speed or task.speed
        rate = "?" if speed is None else f"{60.0 * speed:.1f}"
        unit = task.fields.get("type", "checks")
        return Text(f"{rate} {unit}/min", style="progress.data.speed", justify="center")


def init_progress(console: Console) -> Progress:
    """
    Initialize and configure the progress display of a run.

    Args:
        console   : The rich console object to which the progress bar will be output.

    Returns:
        Progress  : A configured Progress object.
    """
    return Progress(
        TextColumn("[bold cyan2]{task.description}", justify="left", style="cyan2"),
        BarColumn(bar_width=None, finished_style="cyan"),
        "[progress.percentage]{task.percentage:>3.0f}%",
        "•",
        SpinnerColumn(style="progress.data.speed"),
        CheckRateColumn(),
        "•",
        TextColumn(
            "[bold cyan2]{task.completed:>02.0f}[/]/[bold cyan2]{task.fields[rendered_total]}[/]",
            justify="left",
            style="cyan2",
        ),
        "•",
        TimeElapsedColumn(),
        console=console,
        transient=True,
        refresh_per_second=10,
        expand=True,
    )


@dataclass
class SweepProgressManager:
    """
    Tracks a command on a progress bar. Single computations leave the bar indeterminate; corpus sweeps advance it
    once per finished case.

    Attributes:
        progress    : The rich progress object.
        task        : The task of the run.
    """

    progress: Progress
    task: TaskID

    async def on_sweep_started(self, total: int) -> None:
        self.progress.update(self.task, total=total, rendered_total=f"{total:02}")

    async def advance_progress(self, case_id: str, progress_type: SweepProgressType) -> None:
        """
        Advance the bar when a case completes.

        Args:
            case_id         : Id of the corpus case.
            progress_type   : The type of progress update to process.
        """
        if progress_type == "Start":
            self.progress.update(self.task, description=f"Checking {case_id}...")
        elif progress_type == "Completed":
            self.progress.update(self.task, advance=1)
