from __future__ import annotations

import asyncio
import contextlib
import signal
import sys
from typing import Any

import rich_click as click

from harmonic_dirichlet import logger
from harmonic_dirichlet.cmd import runner
from harmonic_dirichlet.cmd.exceptions import CLIMissingCommandError, CLIMissingProblemError
from harmonic_dirichlet.cmd.problem import ProblemFile, load_spec
from harmonic_dirichlet.cmd.progress import SweepProgressManager, init_progress
from harmonic_dirichlet.core.corpus import corpus_files
from harmonic_dirichlet.core.exceptions import HarmonicDirichletError
from harmonic_dirichlet.core.exporter import ReportExporter
from harmonic_dirichlet.core.quadrature.options import QuadratureSpec

help_config = click.RichHelpConfiguration(
    show_metavars_column=False,
    append_metavars_help=True,
    style_errors_suggestion="magenta italic",
    errors_suggestion="Try running '--help' for more information.",
)

PROBLEM_FREE_COMMANDS = ("figure1",)
"""Commands that run without a problem file."""


class GracefulExit(SystemExit):
    code = 1


class InputErrorCommand(click.RichCommand):
    """Command whose usage errors exit with the input-error code."""

    def parse_args(self, ctx: click.Context, args: list[str]) -> list[str]:
        try:
            return super().parse_args(ctx, args)
        except click.UsageError as exc:
            exc.exit_code = runner.EXIT_INPUT_ERROR
            raise


async def _main(
    command: str | None,
    problem_path: str | None,
    spec_path: str | None,
    out: str | None,
    seed_corpus: str | None,
    progress_manager: SweepProgressManager,
) -> int:
    exporter = ReportExporter(out)
    if seed_corpus:
        written = await exporter.write_files(seed_corpus, corpus_files())
        progress_manager.progress.console.print(f"[green]Seeded {len(written)} files into {seed_corpus}[/]")
    if command is None:
        return runner.EXIT_OK

    spec = await load_spec(spec_path) if spec_path else None
    if problem_path:
        problem = await ProblemFile.load(problem_path, spec)
    else:
        problem = ProblemFile(spec=spec or QuadratureSpec())

    outcome = await runner.run(
        command,
        problem,
        progress_callback=progress_manager.advance_progress,
        on_sweep_started=progress_manager.on_sweep_started,
    )
    if outcome.is_table:
        await exporter.write_csv(outcome.header, outcome.rows)
    else:
        await exporter.write_json(outcome.report(problem.spec))
    return outcome.exit_code


@click.command(cls=InputErrorCommand)
@click.version_option()
@click.pass_context
@click.rich_config(help_config=help_config)
@click.argument("command", required=False, type=click.Choice(runner.COMMANDS))
@click.option(
    "--problem",
    "-p",
    type=click.Path(dir_okay=False, resolve_path=True),
    help="Problem file (JSON) with the measure, function, quadrature and params sections",
)
@click.option(
    "--out",
    "-o",
    type=click.Path(dir_okay=False, writable=True, resolve_path=True),
    help="Report destination. The report goes to stdout when omitted",
)
@click.option(
    "--spec",
    type=click.Path(dir_okay=False, resolve_path=True),
    help="Quadrature specification (JSON) overriding the problem's quadrature section",
)
@click.option(
    "--seed-corpus",
    type=click.Path(file_okay=False, writable=True, resolve_path=True),
    help="Write the built-in corpus as problem files into this directory",
)
@click.option("--debug", type=bool, is_flag=True, help="Enable debug mode")
def cli(
    ctx: click.Context,
    command: str | None,
    problem: str | None,
    out: str | None,
    spec: str | None,
    seed_corpus: str | None,
    debug: bool,
) -> None:
    """
    Numerics for harmonically weighted Dirichlet spaces.

    Exit codes: 0 on success, 1 on input errors, 2 when a certificate, check or integral is inconclusive.
    """
    log, console = logger.setup(
        log_filename="harmonic_dirichlet.log" if debug else None,
        enable_traceback=debug,
        enable_console_logging=debug,
    )

    if command is None and seed_corpus is None:
        raise CLIMissingCommandError(ctx)
    if command is not None and command not in PROBLEM_FREE_COMMANDS and problem is None:
        raise CLIMissingProblemError(command, ctx)

    progress = init_progress(console)
    description = f"Running {command or 'seed-corpus'}..."
    run_task = progress.add_task(description, total=None, type="checks", rendered_total="??")
    progress_manager = SweepProgressManager(progress, run_task)

    loop = asyncio.new_event_loop()
    asyncio.set_event_loop(loop)

    def _shutdown() -> None:
        progress.console.print("[bold red]Stopping[/]...")
        for t in asyncio.all_tasks(loop=loop):
            t.cancel()
        raise GracefulExit()

    def _raise_graceful_exit(*_: Any) -> None:
        _shutdown()

    exit_code = runner.EXIT_INPUT_ERROR
    with progress:
        main_task = loop.create_task(_main(command, problem, spec, out, seed_corpus, progress_manager))
        signal.signal(signal.SIGINT, _raise_graceful_exit)
        signal.signal(signal.SIGTERM, _raise_graceful_exit)
        with contextlib.suppress(GracefulExit):
            try:
                exit_code = loop.run_until_complete(main_task)
            except HarmonicDirichletError as exc:
                console.print(f"[red][bold]Input error:[/bold] {exc}[/]")
                log.exception("Input error")
            except OSError as exc:
                console.print(f"[red][bold]I/O error:[/bold] {exc}[/]")
                log.exception("I/O error")
    loop.close()
    ctx.exit(exit_code)


def run() -> None:
    """CLI entrypoint"""
    if len(sys.argv) <= 1:
        sys.argv.append("--help")

    cli()  # pylint: disable=no-value-for-parameter
