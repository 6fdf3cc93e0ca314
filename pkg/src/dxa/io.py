"""CSV ingestion of user series and persistence of curves, fits and reports."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import TimeSeries
from .errors import InvalidInput, IoError, ParseError
from .fluctuation import CurveKind, FluctuationCurve, ScaleGrid
from .scaling import PowerLawFit

HEADER_MODES = ("auto", "true", "false")


@dataclass(frozen=True)
class ColumnSpec:
    path: str | os.PathLike
    column: int = 0
    delimiter: str = ","
    skip_header: str = "auto"

    def __post_init__(self):
        if int(self.column) < 0:
            raise InvalidInput(f"column must be >= 0, got {self.column}")
        if len(self.delimiter) != 1:
            raise InvalidInput(f"delimiter must be a single character, got {self.delimiter!r}")
        mode = str(self.skip_header).lower()
        if mode in ("yes", "1"):
            mode = "true"
        elif mode in ("no", "0"):
            mode = "false"
        if mode not in HEADER_MODES:
            raise InvalidInput(f"skip_header must be one of {HEADER_MODES}, got {self.skip_header!r}")
        object.__setattr__(self, "skip_header", mode)


def _parse_number(text: str) -> float:
    # float() is locale independent; reject nan/inf spellings explicitly.
    value = float(text.strip())
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text.strip()!r}")
    return value


def read_series(spec: ColumnSpec, label: str | None = None) -> TimeSeries:
    """Parse one column of a delimited text file.

    Rows are numbered from 1 as they appear in the file; blank lines are
    skipped but still counted.
    """
    path = Path(spec.path)
    try:
        with path.open(newline="") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    values = []
    first = True
    for row_no, fields in enumerate(csv.reader(lines, delimiter=spec.delimiter), start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        if spec.column >= len(fields):
            raise ParseError(f"missing column {spec.column} (row has {len(fields)} fields)", row=row_no)
        text = fields[spec.column]
        if first:
            first = False
            if spec.skip_header == "true":
                continue
            if spec.skip_header == "auto":
                try:
                    _parse_number(text)
                except ValueError:
                    continue
        try:
            values.append(_parse_number(text))
        except ValueError:
            raise ParseError(f"cannot parse {text!r} as a number", row=row_no) from None
    if not values:
        raise InvalidInput(f"no samples read from column {spec.column} of {path}")
    return TimeSeries(np.array(values), label=label or f"{path.name}[{spec.column}]")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_series(columns: dict[str, np.ndarray], path=None) -> str:
    """Write equal-length columns as CSV with a header row.  Returns the text."""
    names = list(columns)
    arrays = [np.asarray(columns[k], dtype=np.float64) for k in names]
    if len({a.size for a in arrays}) > 1:
        raise InvalidInput("columns must have equal length")
    lines = [",".join(names)]
    lines += [",".join(_fmt(v) for v in row) for row in zip(*arrays)]
    text = "\n".join(lines) + "\n"
    if path is not None:
        _write_text(path, text)
    return text


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def curve_to_dict(curve: FluctuationCurve, fit: PowerLawFit | None = None, params: dict | None = None) -> dict:
    doc = {
        "kind": curve.kind.value,
        "series_length": int(curve.series_length),
        "scales": [int(n) for n in curve.scales.scales],
        "f2": [float(v) for v in curve.f2],
        "f_signed": [float(v) for v in curve.f_signed],
    }
    if fit is not None:
        doc["fit"] = fit.as_dict()
    doc["params"] = dict(params or {})
    return doc


def write_curve(curve: FluctuationCurve, fit: PowerLawFit | None, path, fmt: str = "json",
                params: dict | None = None) -> None:
    """Write a curve as JSON (with optional fit and params) or as CSV.

    Floats are written with ``repr`` so they round-trip exactly.
    """
    fmt = fmt.lower()
    if fmt == "json":
        text = json.dumps(curve_to_dict(curve, fit, params), indent=2) + "\n"
    elif fmt == "csv":
        lines = ["scale,f2,f_signed"]
        lines += [
            f"{int(n)},{_fmt(f2)},{_fmt(fs)}"
            for n, f2, fs in zip(curve.scales.scales, curve.f2, curve.f_signed)
        ]
        text = "\n".join(lines) + "\n"
    else:
        raise InvalidInput(f"unknown format {fmt!r}; use json or csv")
    _write_text(path, text)


def read_curve(path) -> tuple[FluctuationCurve, PowerLawFit | None, dict]:
    """Load a curve written by :func:`write_curve` (format from the suffix or content)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
            curve = FluctuationCurve(
                ScaleGrid(doc["scales"]), doc["f2"], CurveKind(doc["kind"]), int(doc["series_length"])
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"malformed curve file {path}: {exc}") from exc
        fit = None
        if "fit" in doc:
            f = doc["fit"]
            fit = PowerLawFit(
                exponent=f["exponent"], amplitude=f["amplitude"], fit_range=tuple(f["range"]),
                stderr=f["stderr"], r_squared=f["r_squared"],
                negative_fraction=f["negative_fraction"], points=0,
            )
        return curve, fit, doc.get("params", {})

    scales, f2 = [], []
    rows = list(csv.reader(text.splitlines()))
    for row_no, row in enumerate(rows, start=1):
        if not row or row_no == 1 and row[0].strip() == "scale":
            continue
        try:
            scales.append(int(row[0]))
            f2.append(float(row[1]))
        except (ValueError, IndexError):
            raise ParseError(f"bad curve row {row!r}", row=row_no) from None
    kind = CurveKind.DFA if all(v >= 0 for v in f2) else CurveKind.DXA
    # CSV carries no length; the largest scale + 1 is the smallest valid N.
    return FluctuationCurve(ScaleGrid(scales), f2, kind, max(scales) + 1), None, {}


def write_json(doc: dict, path) -> None:
    _write_text(path, json.dumps(doc, indent=2, sort_keys=False) + "\n")
