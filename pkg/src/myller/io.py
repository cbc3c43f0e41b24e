"""File formats and deterministic report rendering.

Curve files are plain CSV with header ``s,rx,ry,rz,xix,xiy,xiz``, one sample
per row, UTF-8 with LF line endings and '.' decimals. Spec files are JSON
with either sampled invariant arrays or a named preset. Reports are flat
``key = value`` text; floats print with a fixed 17-significant-digit format
(overridable through the MYLLER_FLOAT_FORMAT environment variable) so that
identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .core import Grid, MyllerError
from .frenet import VersorCurve
from .presets import PRESET_NAMES, preset_spec
from .synthesis import InvariantSpec

__all__ = [
    "CurveParseError",
    "NonUniformGridError",
    "format_float",
    "read_curve_csv",
    "write_curve_csv",
    "read_spec_json",
    "render_report",
    "write_plot_csv",
]

CURVE_HEADER = "s,rx,ry,rz,xix,xiy,xiz"

# relative tolerance on the uniformity of the s column
_UNIFORM_RTOL = 1e-9


class CurveParseError(MyllerError):
    """The file cannot be read as the format at all (I/O or syntax level)."""


class NonUniformGridError(MyllerError):
    """The s column is not a strictly increasing uniform grid."""


def format_float(x: float) -> str:
    """Fixed-precision float text; precision from MYLLER_FLOAT_FORMAT (default 17)."""
    digits = os.environ.get("MYLLER_FLOAT_FORMAT", "17")
    try:
        digits = int(digits)
    except ValueError as exc:
        raise MyllerError(
            f"MYLLER_FLOAT_FORMAT must be an integer number of significant digits, "
            f"got {digits!r}"
        ) from exc
    return format(float(x), f".{digits}g")


def _format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def render_report(entries) -> str:
    """Render (key, value) pairs as flat ``key = value`` lines."""
    lines = [f"{key} = {_format_value(value)}" for key, value in entries]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# curve CSV
# ---------------------------------------------------------------------------

def read_curve_csv(path) -> VersorCurve:
    """Parse a curve file, validating the grid and the versor invariants.

    Parse-level problems (missing file, bad header, non-numeric fields)
    raise CurveParseError with the offending line number; grid problems
    raise NonUniformGridError naming the first bad row.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CurveParseError(f"{path}: cannot read file: {exc}") from exc
    if not lines or lines[0].strip() != CURVE_HEADER:
        got = lines[0].strip() if lines else "<empty file>"
        raise CurveParseError(
            f"{path}:1: bad header {got!r}, expected {CURVE_HEADER!r}"
        )
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise CurveParseError(
                f"{path}:{lineno}: expected 7 comma-separated fields, got {len(parts)}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise CurveParseError(f"{path}:{lineno}: non-numeric field: {exc}") from exc
    if len(rows) < 5:
        raise MyllerError(
            f"{path}: too few samples: {len(rows)} rows, need at least 5"
        )
    data = np.asarray(rows)
    s = data[:, 0]
    h = s[1] - s[0]
    if h <= 0:
        raise NonUniformGridError(
            f"{path}: row 3: s is not strictly increasing (step {h!r})"
        )
    steps = np.diff(s)
    scale = max(abs(s[0]), abs(s[-1]), 1.0)
    bad = np.nonzero(np.abs(steps - h) > _UNIFORM_RTOL * scale)[0]
    if bad.size:
        i = int(bad[0])
        raise NonUniformGridError(
            f"{path}: row {i + 3}: non-uniform s spacing: step {steps[i]!r} vs {h!r} "
            f"(relative tolerance {_UNIFORM_RTOL})"
        )
    grid = Grid(float(s[0]), float(h), len(rows))
    return VersorCurve.from_arrays(grid, data[:, 1:4], data[:, 4:7])


def write_curve_csv(path, curve: VersorCurve) -> None:
    s = curve.grid.s()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CURVE_HEADER + "\n")
        for i in range(curve.grid.n):
            row = [s[i], *curve.r.values[i], *curve.xi.values[i]]
            fh.write(",".join(format_float(x) for x in row) + "\n")


def write_plot_csv(path, s: np.ndarray, values: np.ndarray) -> None:
    """Two-column (s, value) CSV for external plotting."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("s,value\n")
        for si, vi in zip(s, values):
            fh.write(f"{format_float(si)},{format_float(vi)}\n")


# ---------------------------------------------------------------------------
# spec JSON
# ---------------------------------------------------------------------------

def _grid_from_json(obj, path) -> Grid:
    try:
        return Grid(float(obj["s0"]), float(obj["h"]), int(obj["n"]))
    except KeyError as exc:
        raise MyllerError(f"{path}: grid needs keys s0, h, n; missing {exc}") from exc


def read_spec_json(path) -> InvariantSpec:
    """Load an invariant spec: sampled arrays or a named preset.

    Expected shapes::

        {"grid": {"s0": 0, "h": 1e-3, "n": 4001},
         "K1": [...], "K2": [...], "a1": [...], "a2": [...], "a3": [...]}

        {"grid": {...}, "preset": {"name": "slant", "params": {"P": 1, "Q": 0.25}}}
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CurveParseError(f"{path}: cannot read file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CurveParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "grid" not in doc:
        raise MyllerError(f"{path}: spec document must be an object with a 'grid' key")
    grid = _grid_from_json(doc["grid"], path)
    if "preset" in doc:
        preset = doc["preset"]
        name = preset.get("name")
        if name not in PRESET_NAMES:
            raise MyllerError(
                f"{path}: unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
            )
        return preset_spec(name, grid, **preset.get("params", {}))
    missing = [k for k in ("K1", "K2", "a1", "a2", "a3") if k not in doc]
    if missing:
        raise MyllerError(f"{path}: spec is missing fields: {', '.join(missing)}")
    arrays = {}
    for key in ("K1", "K2", "a1", "a2", "a3"):
        arr = np.asarray(doc[key], dtype=float)
        if arr.shape != (grid.n,):
            raise MyllerError(
                f"{path}: field {key} has {arr.shape[0] if arr.ndim else 0} values, "
                f"expected grid.n = {grid.n}"
            )
        arrays[key] = arr
    return InvariantSpec.from_arrays(grid, **arrays)
