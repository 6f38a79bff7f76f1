from __future__ import annotations

import rich_click as click


class CLIMissingCommandError(click.UsageError):
    """
    This error is raised when neither a command nor --seed-corpus is given.

    Args:
        ctx: The Click context associated with the error, if any.
    """

    exit_code = 1

    def __init__(self, ctx: click.Context | None = None) -> None:
        message = "A command or --seed-corpus is required."
        super().__init__(message, ctx)


class CLIMissingProblemError(click.UsageError):
    """
    This error is raised when a command that reads a problem file is run without --problem.

    Args:
        command : The command that was requested.
        ctx     : The Click context associated with the error, if any.
    """

    exit_code = 1

    def __init__(self, command: str, ctx: click.Context | None = None) -> None:
        message = f"Command '{command}' needs a problem file; pass it with --problem."
        super().__init__(message, ctx)
