import pytest

from src.harness.records import (
    RESULT_COLUMNS,
    ResultRecord,
    format_value,
    read_results,
    write_results,
    write_trace,
)
from src.training.trainer import TraceRecord


def test_format_values():
    assert format_value(None) == "NA"
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(3) == "3"


def test_results_file_layout_and_reload(tmp_path):
    records = [
        ResultRecord(
            run="harmonic1d", operator="harmonic", dim=1, target=0, lambda_hat=9.869604401089358,
            abs_err=1e-12, rel_err=1.0132e-13, residual=0.25, iters=400, wall_s=1.5, converged=True, seed=0,
        ),
        ResultRecord(run="harmonic1d", operator="harmonic", dim=1, target=1, iters=400, seed=0),
    ]
    path = write_results(tmp_path / "out" / "results.csv", records)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(RESULT_COLUMNS)
    assert lines[2].split(",")[4:8] == ["NA", "NA", "NA", "NA"]
    assert read_results(path) == records


def test_unexpected_header_is_rejected(tmp_path):
    path = tmp_path / "results.csv"
    path.write_text("run,value\nx,1\n")
    with pytest.raises(ValueError):
        read_results(path)


def test_trace_file(tmp_path):
    path = write_trace(tmp_path / "trace.csv", [TraceRecord(1, 0, 0.5, 2.0), TraceRecord(100, 1, 1e-3, 39.5)])
    assert path.read_text().splitlines() == [
        "iteration,target,loss,lambda_hat",
        "1,0,0.5,2",
        "100,1,0.001,39.5",
    ]


def test_no_temporary_files_left_behind(tmp_path):
    write_results(tmp_path / "results.csv", [])
    assert [p.name for p in tmp_path.iterdir()] == ["results.csv"]
