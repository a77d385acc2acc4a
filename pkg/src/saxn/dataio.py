"""Reading series from .dat/.csv files and writing reports and plot data.

Every float written by this module is formatted to 7 significant digits so
that identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from saxn.errors import ColumnNotFound, DatasetNotFound, NonNumericValue, ParseError
from saxn.sax import ALPHABET, SaxWord
from saxn.series import TimeSeries
from saxn.stats import AcfResult

SIG_DIGITS = 7


@dataclass(frozen=True)
class DatasetSpec:
    path: str
    column: int | str = 0
    name: str | None = None
    skip_rows: int = 0

    @property
    def label(self) -> str:
        return self.name or Path(self.path).stem

    @classmethod
    def from_dict(cls, d: Mapping, base_dir: str | os.PathLike | None = None) -> "DatasetSpec":
        path = Path(d["path"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return cls(str(path), d.get("column", 0), d.get("name"), int(d.get("skip_rows", 0)))


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _tokenize(path: Path, skip_rows: int):
    """Yield (line_number, tokens) for data-bearing lines."""
    is_csv = path.suffix.lower() == ".csv"
    with open(path, newline="") as fh:
        if is_csv:
            rows = ((i, [t.strip() for t in row]) for i, row in enumerate(csv.reader(fh), start=1))
        else:
            rows = ((i, line.split()) for i, line in enumerate(fh, start=1))
        skipped = 0
        for lineno, tokens in rows:
            if not tokens or not any(tokens) or tokens[0].startswith("#"):
                continue
            if skipped < skip_rows:
                skipped += 1
                continue
            yield lineno, tokens


def read_series(spec: DatasetSpec) -> TimeSeries:
    """Extract one numeric column from a whitespace .dat or comma .csv file.

    ``#`` comment lines and blank lines are ignored. A first data row whose
    leading token is not numeric is taken as a header, which allows
    ``spec.column`` to be a column name.
    """
    path = Path(spec.path)
    if not path.is_file():
        raise DatasetNotFound(f"dataset file not found: {path}")

    header = None
    col = spec.column
    values = []
    for lineno, tokens in _tokenize(path, spec.skip_rows):
        if header is None and not values and not _is_number(tokens[0]):
            header = tokens
            continue
        if isinstance(col, str):
            if header is None:
                raise ColumnNotFound(f"column {col!r} requested but {path.name} has no header")
            if col not in header:
                raise ColumnNotFound(f"column {col!r} not in header {header}")
            col = header.index(col)
        if col >= len(tokens) or col < -len(tokens):
            if not values:
                raise ColumnNotFound(f"column {col} out of range for {len(tokens)}-column file")
            raise ParseError(f"expected at least {col + 1} columns, found {len(tokens)}", lineno)
        token = tokens[col]
        try:
            values.append(float(token))
        except ValueError:
            raise NonNumericValue(token, lineno, col) from None
    if not values:
        raise ParseError(f"no data rows in {path}")
    return TimeSeries(np.array(values), name=spec.label, source=f"{path}#{spec.column}")


def fmt_float(x: float) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return f"{x:.{SIG_DIGITS}g}"


def _round_floats(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(fmt_float(x)) if math.isfinite(x) else None
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_round_floats(v) for v in obj.tolist()]
    if isinstance(obj, Mapping):
        return {str(k): _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return _round_floats(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report) -> str:
    """Deterministic JSON text: sorted keys, 7 significant digits."""
    return json.dumps(_round_floats(report), sort_keys=True, indent=2) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    return str(v)


def to_csv(rows: Sequence[Mapping]) -> str:
    """CSV text for a list of flat rows. Column order follows first appearance."""
    rows = list(rows)
    buf = io.StringIO()
    if not rows:
        return ""
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _as_rows(report) -> list:
    if hasattr(report, "to_rows"):
        return report.to_rows()
    if isinstance(report, Mapping):
        return [report]
    if isinstance(report, (list, tuple)):
        return [r.to_dict() if hasattr(r, "to_dict") else r for r in report]
    return [report.to_dict()]


def write_report(report, path, format: str | None = None) -> Path:
    """Write a report as JSON or CSV; ``format`` defaults from the suffix."""
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".") or "json").lower()
    if fmt == "json":
        text = to_json(report)
    elif fmt == "csv":
        text = to_csv(_as_rows(report))
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def write_series(series: TimeSeries, path) -> Path:
    """One value per line, 7 significant digits. Readable by :func:`read_series`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {series.name}"] + [fmt_float(float(v)) for v in series.values]
    path.write_text("\n".join(lines) + "\n")
    return path


def plot_rows(data, label: str = "series") -> list[dict]:
    """Long-format rows (x, y, series_label) for a series, ACF, word histogram
    or a list of ACF-sum/sigma points."""
    if isinstance(data, AcfResult):
        band = data.significance_band
        return [
            {"x": lag, "y": float(c), "series_label": label, "band": band}
            for lag, c in enumerate(data.coefficients)
        ]
    if isinstance(data, SaxWord):
        counts = data.counts()
        total = int(counts.sum())
        return [
            {"x": ALPHABET[i], "y": int(c) / total, "series_label": label}
            for i, c in enumerate(counts)
        ]
    if isinstance(data, TimeSeries):
        return [{"x": t, "y": float(v), "series_label": label} for t, v in enumerate(data.values)]
    if isinstance(data, (list, tuple)) and all(isinstance(r, Mapping) for r in data):
        if all({"series_name", "acf_sum", "post_paa_sigma"} <= set(r) for r in data):
            out = []
            for key in ("acf_sum", "post_paa_sigma"):
                out.extend({"x": r["series_name"], "y": r[key], "series_label": key} for r in data)
            return out
        return list(data)
    raise TypeError(f"no plot-data layout for {type(data).__name__}")


def emit_plot_data(data, path, label: str = "series") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_csv(plot_rows(data, label)))
    return path
