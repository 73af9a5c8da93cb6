"""CSV rendering of iteration traces."""

import csv
import io
from pathlib import Path

from src.models.solver import IterationTrace

CSV_HEADER = ("k", "residual", "b0_to_ref", "lagrangian_gap", "fejer_margin", "growth_gap", "wall_time")


def _cell(value: float | int | None) -> str:
    if value is None:
        return ""
    # repr is the shortest decimal that round-trips
    return repr(value)


def trace_to_csv(trace: IterationTrace | None) -> str:
    """One row per record, in iteration order; a missing trace gives the header only."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in trace.records if trace is not None else ():
        writer.writerow([_cell(getattr(record, column)) for column in CSV_HEADER])
    return buffer.getvalue()


def emit_csv(trace: IterationTrace | None, path: Path) -> None:
    path.write_text(trace_to_csv(trace), encoding="utf-8")
