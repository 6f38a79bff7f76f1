from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Any, Iterable, Literal, Mapping, Sequence

import aiofiles
import numpy as np


def encode_value(value: Any) -> Any:
    """
    Converts a report value to plain JSON types. Non-finite floats become the strings "inf", "-inf" and "nan",
    complex numbers become [re, im] pairs.
    """
    if isinstance(value, Mapping):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return [encode_value(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, (complex, np.complexfloating)):
        return [encode_value(value.real), encode_value(value.imag)]
    return value


def render_json(data: Mapping[str, Any]) -> str:
    return json.dumps(encode_value(data), sort_keys=True, indent=4, allow_nan=False)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


@dataclass
class ReportExporter:
    """
    Writes reports as JSON or CSV, either to a file or to standard output.

    Attributes:
        dest    : Destination file. Reports go to stdout when it is None.
    """

    dest: str | PathLike[str] | None = None

    async def write_json(self, report: Mapping[str, Any]) -> None:
        """
        Writes a JSON report with sorted keys, so identical reports are byte-identical.

        Args:
            report: The report to write.
        """
        await self._emit(render_json(report), end="\n")

    async def write_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        """
        Writes rows as CSV.

        Args:
            header  : Column names.
            rows    : Row values, already formatted.
        """
        await self._emit(render_csv(header, rows), end="")

    async def write_files(self, directory: str | PathLike[str], files: Mapping[str, Mapping[str, Any]]) -> list[Path]:
        """
        Writes one JSON document per entry into a directory.

        Args:
            directory   : Target directory, created when missing.
            files       : File names mapped to their JSON content.

        Returns:
            The written paths.
        """
        written = []
        for name, data in files.items():
            target = Path(directory) / name
            await self._aio_write(target, render_json(data))
            written.append(target)
        return written

    async def _emit(self, data: str, end: str) -> None:
        if self.dest is None:
            sys.stdout.write(data + end)
            sys.stdout.flush()
            return
        await self._aio_write(self.dest, data, end=end)

    async def _aio_write(
        self,
        target: str | PathLike[str],
        data: str,
        mode: Literal["a", "w"] = "w",
        end: str = "\n",
    ) -> None:
        """
        Asynchronously writes the given data to a file, creating the parent path if it does not exist.

        Args:
            target  : The target file path where data will be written.
            data    : The data to be written to the file.
            mode    : The file opening mode ('a' for append, 'w' for write).
            end     : The string to append at the end of the file.
        """
        target = Path(target)
        target.parent.mkdir(exist_ok=True, parents=True)
        async with aiofiles.open(target, mode=mode, encoding="utf-8", newline="") as f:
            await f.write(data + end)
