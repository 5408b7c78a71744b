"""
Result rows and their CSV form.

Floats are written with 17 significant digits so that reading a file back
reproduces the in-memory records exactly; missing values are written as NA.
Files are written to a temporary sibling first and renamed into place.
"""
import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

from pydantic import BaseModel

RESULT_COLUMNS = [
    "run",
    "operator",
    "dim",
    "target",
    "lambda_hat",
    "abs_err",
    "rel_err",
    "residual",
    "iters",
    "wall_s",
    "converged",
    "seed",
]
TRACE_COLUMNS = ["iteration", "target", "loss", "lambda_hat"]
NA = "NA"


class ResultRecord(BaseModel):
    run: str
    operator: str
    dim: int
    target: int
    lambda_hat: Optional[float] = None
    abs_err: Optional[float] = None
    rel_err: Optional[float] = None
    residual: Optional[float] = None
    iters: int = 0
    wall_s: float = 0.0
    converged: bool = False
    seed: int = 0


def format_value(value) -> str:
    if value is None:
        return NA
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _parse_float(text: str) -> Optional[float]:
    return None if text == NA else float(text)


def write_atomic(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _render(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def write_results(path: Union[str, Path], records: Sequence[ResultRecord]) -> Path:
    rows = ([getattr(r, c) for c in RESULT_COLUMNS] for r in records)
    return write_atomic(path, _render(RESULT_COLUMNS, rows))


def read_results(path: Union[str, Path]) -> List[ResultRecord]:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != RESULT_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        records = []
        for row in reader:
            records.append(
                ResultRecord(
                    run=row["run"],
                    operator=row["operator"],
                    dim=int(row["dim"]),
                    target=int(row["target"]),
                    lambda_hat=_parse_float(row["lambda_hat"]),
                    abs_err=_parse_float(row["abs_err"]),
                    rel_err=_parse_float(row["rel_err"]),
                    residual=_parse_float(row["residual"]),
                    iters=int(row["iters"]),
                    wall_s=float(row["wall_s"]),
                    converged=row["converged"] == "true",
                    seed=int(row["seed"]),
                )
            )
    return records


def write_trace(path: Union[str, Path], trace: Sequence) -> Path:
    rows = ([t.iteration, t.target, float(t.loss), float(t.lambda_hat)] for t in trace)
    return write_atomic(path, _render(TRACE_COLUMNS, rows))
