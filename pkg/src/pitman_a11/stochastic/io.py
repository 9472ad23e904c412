"""CSV output for samples and traces: columns replica, t, coord_t, coord_x, ..."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def csv_to_rows(text: str) -> tuple:
    r = list(csv.reader(io.StringIO(text)))
    return r[0], r[1:]


def walk_trace_rows(sample, replica: int = 0) -> list:
    """One row per integer time of a WalkSample: replica, t, coord_t, coord_x, coord_delta, xi."""
    rows = []
    for n in range(sample.H + 1):
        w = sample.plus_path(n)
        rows.append([replica, n, float(w.cL), float(2 * w.cA), float(w.cD),
                     " ".join(str(v) for v in sample.strings_at[n])])
    return rows


WALK_HEADER = ["replica", "t", "coord_t", "coord_x", "coord_delta", "xi"]
