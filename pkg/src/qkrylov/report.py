"""Tabular experiment reports with deterministic CSV/JSON serialization."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FORMAT_VERSION = "qkrylov-report/1"
# rounding slack for exact-mode rows whose predicted bound is zero
BOUND_FLOOR = 1e-10


def to_jsonable(x):
    """Convert numpy scalars/arrays and complex numbers into plain JSON values."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, int):
        # huge query counts do not fit a double; keep them exact as strings
        return x if abs(x) < 2 ** 53 else str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _clean_float(x.real), "im": _clean_float(x.imag)}
    if isinstance(x, (float, np.floating)):
        return _clean_float(float(x))
    return x


def _clean_float(v: float):
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(v)


def config_hash(config: dict) -> str:
    blob = json.dumps(to_jsonable(config), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class ExperimentReport:
    """Rows of flat dicts plus a summary.

    Rows flagged ``bound_check=True`` must satisfy
    ``predicted_bound + BOUND_FLOOR >= measured_error``; :meth:`failed_rows` lists the ones
    that do not.
    """

    command: str
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    format_version: str = FORMAT_VERSION

    def add(self, **row) -> dict:
        self.rows.append(row)
        return row

    def bound_rows(self) -> list:
        return [r for r in self.rows if r.get("bound_check")]

    def failed_rows(self) -> list:
        return [r for r in self.bound_rows() if not r.get("bound_ok", False)]

    def check_bound(self, row: dict) -> dict:
        row["bound_check"] = True
        row["bound_ok"] = bool(row["measured_error"] <= row["predicted_bound"] + BOUND_FLOOR)
        return row

    def columns(self) -> list:
        cols = []
        for r in self.rows:
            for k in r:
                if k not in cols:
                    cols.append(k)
        return cols

    def to_dict(self) -> dict:
        return to_jsonable({
            "format_version": self.format_version,
            "command": self.command,
            "summary": self.summary,
            "rows": self.rows,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = self.columns()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: _csv_cell(r.get(k, "")) for k in cols})
        return buf.getvalue()

    def write(self, out_dir) -> list:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json())
        (out / "report.csv").write_text(self.to_csv())
        written = [out / "report.json", out / "report.csv"]
        for name, (xs, ys) in sorted(self.curves.items()):
            path = out / f"{name}.dat"
            path.write_text("".join(f"{float(x):.12g} {float(y):.12g}\n" for x, y in zip(xs, ys)))
            written.append(path)
        return written


def _csv_cell(v):
    v = to_jsonable(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, float):
        return repr(v)
    return v
