"""File formats: CSV tables, raw complex fields with JSON sidecars, JSON records."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer, np.floating, np.bool_)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj) + "\n")
    return path


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_realization_csv(path, r) -> Path:
    return write_csv(path, ["j", "A_j", "k_j", "phi_j"],
                     [(int(j), a, k, ph) for j, a, k, ph in r.mode_table()])


def write_discrete_spectrum_csv(path, D) -> Path:
    n = np.arange(D.coefficients.size)
    keep = D.coefficients != 0
    return write_csv(path, ["n", "k", "P_n"],
                     [(int(i), i / D.L, P) for i, P in zip(n[keep], D.coefficients[keep])])


def write_complex_csv(path, values, x=None) -> Path:
    """Two-column ``real,imag`` CSV (with a leading ``x`` column when given)."""
    values = np.asarray(values, dtype=complex).ravel()
    if x is None:
        return write_csv(path, ["real", "imag"], zip(values.real, values.imag))
    return write_csv(path, ["x", "real", "imag"], zip(np.asarray(x), values.real, values.imag))


def write_field_binary(path, values, **meta) -> tuple[Path, Path]:
    """Raw little-endian float64 (real, imag) pairs, row-major, plus ``<path>.json`` sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arr = np.ascontiguousarray(np.asarray(values, dtype=np.complex128))
    arr.view(np.float64).astype("<f8").tofile(path)
    sidecar = path.with_name(path.name + ".json")
    write_json(sidecar, {"shape": list(arr.shape), "dtype": "<f8 (real, imag) pairs",
                         "order": "row-major, time-major", **meta})
    return path, sidecar


def read_field_binary(path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    meta = json.loads(path.with_name(path.name + ".json").read_text())
    raw = np.fromfile(path, dtype="<f8")
    arr = raw.view(np.complex128).reshape(meta["shape"])
    return arr, meta


def write_heatmap_csv(path, values, x, t) -> Path:
    """Long-format ``t,x,value`` rows for space-time plots."""
    values = np.asarray(values)
    rows = ((ti, xi, values[a, b]) for a, ti in enumerate(t) for b, xi in enumerate(x))
    return write_csv(path, ["t", "x", "value"], rows)
