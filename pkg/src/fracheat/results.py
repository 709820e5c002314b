"""Result rows, their CSV form and the derived plot-data files."""

from __future__ import annotations

import csv
import math
import os
import re
from dataclasses import dataclass

COLUMNS = ("d", "alpha", "beta", "hurst", "t", "quantity", "value", "err", "method", "seed")

_P_TAG = re.compile(r"^log_pmoment_bound:p=(?P<p>[^:]+)$")


@dataclass(frozen=True)
class ResultRow:
    d: int
    alpha: float
    beta: float
    hurst: float
    t: float
    quantity: str
    value: float
    err: float
    method: str
    seed: int | None = None


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.17g}"
    return str(x)


def write_csv(path: str | os.PathLike, rows) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(COLUMNS)
        for r in rows:
            wr.writerow([_fmt(getattr(r, c)) for c in COLUMNS])


def _opt_int(s: str):
    return int(s) if s != "" else None


def read_csv(path: str | os.PathLike) -> list[ResultRow]:
    """Parse a results CSV written by :func:`write_csv`."""
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        try:
            header = next(rd)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if tuple(header) != COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = []
        for no, rec in enumerate(rd, start=2):
            if len(rec) != len(COLUMNS):
                raise ValueError(f"{path}:{no}: expected {len(COLUMNS)} fields, got {len(rec)}")
            try:
                rows.append(
                    ResultRow(
                        int(rec[0]),
                        float(rec[1]),
                        float(rec[2]),
                        float(rec[3]),
                        float(rec[4]) if rec[4] != "" else math.nan,
                        rec[5],
                        float(rec[6]),
                        float(rec[7]) if rec[7] != "" else math.nan,
                        rec[8],
                        _opt_int(rec[9]),
                    )
                )
            except ValueError as exc:
                raise ValueError(f"{path}:{no}: {exc}") from None
    return rows


def p_of(quantity: str) -> float | None:
    m = _P_TAG.match(quantity)
    return float(m.group("p")) if m else None


def emit_plot_data(sweep_csv: str | os.PathLike, prefix: str) -> tuple[str, str]:
    """Write ``(log t, log log-bound)`` and ``(log p, log log-bound)`` series.

    Returns the two file paths.  Rows with a non-positive bound cannot be put
    on a log-log scale and are skipped.
    """
    rows = read_csv(sweep_csv)
    rho = sorted((r.t, r.value) for r in rows if r.quantity == "log_bound")
    pp = sorted((p_of(r.quantity), r.value) for r in rows if p_of(r.quantity) is not None)
    paths = (f"{prefix}plotdata-rho.tsv", f"{prefix}plotdata-p.tsv")
    for path, head, data in ((paths[0], "log_t", rho), (paths[1], "log_p", pp)):
        with open(path, "w") as fh:
            fh.write(f"{head}\tlog_log_bound\n")
            for x, v in data:
                if x > 0 and v > 0 and math.isfinite(v):
                    fh.write(f"{math.log(x):.17g}\t{math.log(v):.17g}\n")
    return paths


def read_plot_data(path: str | os.PathLike) -> list[tuple[float, float]]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    return [tuple(float(x) for x in ln.split("\t")) for ln in lines[1:] if ln]
