"""
CSV / JSON artifact writers. Floats are written with 17 significant digits,
'.' as decimal separator and '\n' line endings so that identical runs give
byte-identical files.
"""

import csv
import json
import sys
from contextlib import contextmanager
from typing import Iterable, List, Optional, Sequence

import numpy as np


FLOAT_FORMAT = ".17g"
STDOUT = "-"


@contextmanager
def open_output(output: Optional[str]):
    if output is None or output == STDOUT:
        yield sys.stdout
        return
    with open(output, "w", encoding="utf-8", newline="") as handle:
        yield handle


def trajectory_columns(n: int, velocity: Sequence[str] = ("u", "v"), extra: Iterable[str] = ()) -> List[str]:
    """t, x1, y1, ..., xn, yn, z, then per-pair velocity columns and extras."""
    columns = ["t"]
    for i in range(1, n + 1):
        columns.extend((f"x{i}", f"y{i}"))
    columns.append("z")
    for i in range(1, n + 1):
        columns.extend(f"{name}{i}" for name in velocity)
    columns.extend(extra)
    return columns


def format_float(value) -> str:
    if value is None:
        return ""
    return format(float(value), FLOAT_FORMAT)


def write_table(columns: Sequence[str], rows: np.ndarray, output: Optional[str], fmt: str = "csv") -> None:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != len(columns):
        raise ValueError(f"Table has {rows.shape[1]} columns but {len(columns)} names.")
    with open_output(output) as handle:
        if fmt == "json":
            json.dump({"columns": list(columns), "rows": rows.tolist()}, handle, indent=2)
            handle.write("\n")
        else:
            np.savetxt(
                handle,
                rows,
                fmt="%" + FLOAT_FORMAT,
                delimiter=",",
                newline="\n",
                header=",".join(columns),
                comments="",
            )


def write_records(fieldnames: Sequence[str], records: Sequence[dict], output: Optional[str], fmt: str = "csv") -> None:
    """Rows of mixed strings / numbers / None (None becomes an empty cell)."""
    with open_output(output) as handle:
        if fmt == "json":
            json.dump([dict(r) for r in records], handle, indent=2)
            handle.write("\n")
            return
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(fieldnames)
        for record in records:
            writer.writerow(
                [record[name] if isinstance(record[name], (str, int)) else format_float(record[name]) for name in fieldnames]
            )


def write_json(payload: dict, output: Optional[str]) -> None:
    with open_output(output) as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
