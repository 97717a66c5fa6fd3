"""Deterministic CSV and JSON artifacts.

Floats are written with 17 significant digits (exact round trip for
doubles), rows in a fixed order, LF line endings.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .spectral import WaveField


def fmt(value) -> str:
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, payload) -> Path:
    path = Path(path)
    try:
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
        path.write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_table(path, header, columns) -> Path:
    """Write equal-length columns under ``header``; numbers at 17 digits."""
    path = Path(path)
    columns = [np.asarray(c) for c in columns]
    if len(header) != len(columns):
        raise ValueError("header and columns differ in length")
    n = columns[0].size if columns else 0
    if any(c.size != n for c in columns):
        raise ValueError("columns differ in length")
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(
            c.flat[i] if c.dtype.kind in "USO" else fmt(c.flat[i]) for c in columns
        ))
    try:
        path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_table(path) -> dict:
    """Strict reader: every non-header cell must parse as a float."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {name: [] for name in header}
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ValueError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        for name, cell in zip(header, row):
            cols[name].append(float(cell))
    return {k: np.array(v) for k, v in cols.items()}


def _long_format(field: WaveField):
    # time-major ordering: all x for the first time, then the next
    tt, xx = np.meshgrid(field.times, field.x, indexing="ij")
    return xx.ravel(), tt.ravel(), field.values.T.ravel()


def write_field(field: WaveField, directory, stem: str = "field") -> list[Path]:
    """Write ``<stem>.csv`` in long format (x, t, u, plus error_bound when
    the field carries bounds) and ``<stem>.json`` with the metadata."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    x, t, u = _long_format(field)
    header, columns = ["x", "t", "u"], [x, t, u]
    if field.error_bounds is not None:
        header.append("error_bound")
        columns.append(np.asarray(field.error_bounds).T.ravel())
    paths = [write_table(directory / f"{stem}.csv", header, columns)]
    meta = dict(field.meta)
    meta["software_version"] = __version__
    meta["shape"] = {"nx": int(field.x.size), "nt": int(field.times.size)}
    if field.failures:
        meta["failures"] = field.failures
    paths.append(write_json(directory / f"{stem}.json", meta))
    return paths


def read_field(csv_path) -> WaveField:
    cols = read_table(csv_path)
    # keep first-appearance order for both axes
    _, t_first = np.unique(cols["t"], return_index=True)
    times = cols["t"][np.sort(t_first)]
    nt = times.size
    nx = cols["x"].size // nt if nt else 0
    x = cols["x"][:nx]
    values = cols["u"].reshape(nt, nx).T if nt else np.zeros((0, 0))
    bounds = cols["error_bound"].reshape(nt, nx).T if "error_bound" in cols and nt else None
    return WaveField(x=x, times=times, values=values, error_bounds=bounds)


def write_dispersion(curve, path) -> Path:
    return write_table(path, list(curve.COLUMNS), curve.columns())
