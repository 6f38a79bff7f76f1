from __future__ import annotations

import asyncio
import logging
import sys
from logging import FileHandler

import aiofiles
import numpy
import rich_click as click
import scipy
from rich import traceback
from rich.console import Console
from rich.logging import RichHandler

FILE_LOG_FORMAT = "%(asctime)s - %(levelname)-6s - [%(name)s] - %(message)s - %(filename)s - %(lineno)d"

QUIET_LOGGERS = {
    "asyncio": logging.INFO,
    "aiofiles": logging.INFO,
    "click": logging.WARNING,
    "py.warnings": logging.WARNING,
}
"""Third-party loggers kept above the requested level."""


def setup(
    log_level: int = logging.DEBUG,
    log_filename: str | None = None,
    enable_console_logging: bool = False,
    enable_traceback: bool = False,
) -> tuple[logging.Logger, Console]:
    """
    Sets up logging and the rich console shared by logs, progress bars and error messages.

    The console writes to stderr; stdout carries the reports. Warnings raised by numpy and scipy (integration
    warnings, invalid values) are routed to the log when console logging or a log file is enabled.

    Args:
        log_level               : Level of the root logger and its handlers.
        log_filename            : Log file, none when omitted.
        enable_console_logging  : Log to the console through a RichHandler.
        enable_traceback        : Install rich tracebacks; otherwise tracebacks are cut to the error line.

    Returns:
        The configured logger and the rich console object.
    """
    console = Console(stderr=True)
    if not enable_traceback:
        sys.tracebacklimit = 0
    else:
        traceback.install(
            console=console,
            show_locals=False,
            suppress=[click, numpy, scipy, aiofiles, asyncio],
        )

    log = logging.getLogger()
    log.setLevel(log_level)

    if enable_console_logging:
        console_handler = RichHandler(console=console, level=log_level, rich_tracebacks=enable_traceback, markup=True)
        log.addHandler(console_handler)
    else:
        log.addHandler(logging.NullHandler())

    if log_filename:
        file_handler = FileHandler(log_filename, encoding="utf-8")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(logging.Formatter(FILE_LOG_FORMAT))
        log.addHandler(file_handler)

    logging.captureWarnings(enable_console_logging or bool(log_filename))
    for name, level in QUIET_LOGGERS.items():
        logging.getLogger(name).setLevel(max(level, log_level))

    return log, console
