"""Trace CSV unit tests."""

from src.cli.csv_trace import CSV_HEADER, emit_csv, trace_to_csv
from src.core.blockvec import BlockVector, PrimalDual
from src.models.solver import IterationRecord, IterationTrace

HEADER_LINE = "k,residual,b0_to_ref,lagrangian_gap,fejer_margin,growth_gap,wall_time\n"


def make_trace() -> IterationTrace:
    return IterationTrace(
        solver="pdps",
        records=(
            IterationRecord(k=0, residual=2.0, b0_to_ref=0.5, lagrangian_gap=0.25),
            IterationRecord(k=10, residual=1e-09, b0_to_ref=0.1, lagrangian_gap=0.0, fejer_margin=-0.0),
        ),
        final_u=PrimalDual(BlockVector([[0.0]]), BlockVector([[0.0]])),
        stop_reason="tol",
        iterations=10,
    )


def test_header_only_without_a_trace():
    assert trace_to_csv(None) == HEADER_LINE
    assert ",".join(CSV_HEADER) + "\n" == HEADER_LINE


def test_rows_in_iteration_order_with_empty_cells():
    lines = trace_to_csv(make_trace()).splitlines(keepends=True)

    assert lines[0] == HEADER_LINE
    assert lines[1] == "0,2.0,0.5,0.25,,,\n"
    assert lines[2] == "10,1e-09,0.1,0.0,-0.0,,\n"


def test_values_round_trip_exactly():
    value = 0.1 + 0.2
    trace = make_trace().model_copy(update={"records": (IterationRecord(k=0, residual=value),)})

    cell = trace_to_csv(trace).splitlines()[1].split(",")[1]

    assert float(cell) == value


def test_emit_csv(tmp_path):
    path = tmp_path / "trace.csv"

    emit_csv(make_trace(), path)

    assert path.read_text(encoding="utf-8") == trace_to_csv(make_trace())
