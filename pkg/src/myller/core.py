"""Shared numerical primitives.

Uniform arclength grids, sampled scalar/vector fields, fourth-order finite
differences, cumulative integration, constancy statistics and orthonormal
frame repair. Everything here is pure and operates on immutable inputs, so
all functions are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

__all__ = [
    "MyllerError",
    "TooFewSamplesError",
    "DegenerateInputError",
    "GridMismatchError",
    "Grid",
    "ScalarField",
    "VectorField",
    "ConstancyStats",
    "diff",
    "diff_values",
    "cumint",
    "cumint_values",
    "constancy",
    "constancy_values",
    "orthonormalize",
]


class MyllerError(Exception):
    """Base class for all validation and computation errors in this package."""


class TooFewSamplesError(MyllerError):
    """Raised when a grid is too short for the requested stencil."""


class DegenerateInputError(MyllerError):
    """Raised when an input is too close to singular to process."""


class GridMismatchError(MyllerError):
    """Raised when two sampled objects do not share the same grid."""


# ---------------------------------------------------------------------------
# grids and fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Uniform arclength grid s_i = s0 + i*h, i = 0..n-1."""

    s0: float
    h: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.s0):
            raise MyllerError("grid origin s0 must be finite")
        if not (self.h > 0 and np.isfinite(self.h)):
            raise MyllerError(f"grid step h must be positive and finite, got {self.h}")
        if self.n < 5:
            raise TooFewSamplesError(f"grid needs at least 5 samples, got {self.n}")

    def s(self) -> np.ndarray:
        return self.s0 + self.h * np.arange(self.n)

    def interior(self, trim: int) -> "Grid":
        """Sub-grid with `trim` samples removed from each end."""
        if self.n - 2 * trim < 5:
            raise TooFewSamplesError(
                f"trimming {trim} samples from each end of a {self.n}-sample grid "
                "leaves fewer than 5 samples"
            )
        return Grid(self.s0 + trim * self.h, self.h, self.n - 2 * trim)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real-valued samples on a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise MyllerError(
                f"scalar field values have shape {values.shape}, expected ({self.grid.n},)"
            )
        if not np.all(np.isfinite(values)):
            raise MyllerError("scalar field contains non-finite values")
        object.__setattr__(self, "values", _freeze(values))

    def interior(self, trim: int) -> "ScalarField":
        if trim == 0:
            return self
        return ScalarField(self.grid.interior(trim), self.values[trim:-trim])


@dataclass(frozen=True, eq=False)
class VectorField:
    """3-vector-valued samples on a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n, 3):
            raise MyllerError(
                f"vector field values have shape {values.shape}, expected ({self.grid.n}, 3)"
            )
        if not np.all(np.isfinite(values)):
            raise MyllerError("vector field contains non-finite values")
        object.__setattr__(self, "values", _freeze(values))

    def interior(self, trim: int) -> "VectorField":
        if trim == 0:
            return self
        return VectorField(self.grid.interior(trim), self.values[trim:-trim])


@dataclass(frozen=True)
class ConstancyStats:
    """Summary of how close a sampled quantity is to a constant.

    rel_dev is max_abs_dev / max(|mean|, floor); the floor keeps the ratio
    meaningful for quantities that are constant at zero.
    """

    mean: float
    max_abs_dev: float
    rel_dev: float
    is_constant: bool


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def _fd_weights(offsets, order: int) -> np.ndarray:
    """Exact finite-difference weights for the given integer offsets.

    Solves the Vandermonde moment system in rational arithmetic so the
    returned float64 weights are correctly rounded.
    """
    m = len(offsets)
    rows = [
        [Fraction(int(k)) ** j for k in offsets]
        + [Fraction(factorial(order)) if j == order else Fraction(0)]
        for j in range(m)
    ]
    for col in range(m):
        piv = next(r for r in range(col, m) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col]
        rows[col] = [x / inv for x in rows[col]]
        for r in range(m):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return np.array([float(rows[r][m]) for r in range(m)])


def _build_stencils():
    # (order) -> (center radius, central row, low-edge rows, high-edge rows)
    # Central rows are the classic fourth-order stencils; edge rows are the
    # one-sided fourth-order rows on the smallest window that supports them
    # (5 points for d1, 6 for d2, 7 for d3).
    table = {}
    for order, radius, bw, nb in ((1, 2, 5, 2), (2, 2, 6, 2), (3, 3, 7, 3)):
        central = _fd_weights(np.arange(-radius, radius + 1), order)
        low = [_fd_weights(np.arange(bw) - i, order) for i in range(nb)]
        high = [_fd_weights(np.arange(-bw + 1, 1) + (nb - 1 - i), order) for i in range(nb)]
        table[order] = (radius, central, low, high)
    return table


_STENCILS = _build_stencils()
_MIN_SAMPLES = {1: 5, 2: 6, 3: 7}


def diff_values(values: np.ndarray, h: float, order: int = 1) -> np.ndarray:
    """Differentiate raw samples; fourth-order accurate at every sample.

    Interior samples use central stencils, edge samples one-sided rows of
    the same order of accuracy. Every row is applied in subtract-the-anchor
    form, sum of w_k (v_k - v_anchor): the weights of a derivative stencil
    sum to zero, so this is algebraically identical but makes constants
    differentiate to exactly zero and keeps rounding from seeing the common
    level of the samples. Works on (n,) and (n, k) arrays columnwise.
    """
    if order not in (1, 2, 3):
        raise MyllerError(f"derivative order must be 1, 2 or 3, got {order}")
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < _MIN_SAMPLES[order]:
        raise TooFewSamplesError(
            f"order-{order} differentiation needs at least {_MIN_SAMPLES[order]} samples, got {n}"
        )
    radius, central, low, high = _STENCILS[order]
    out = np.empty_like(values)

    anchor = values[radius:n - radius]
    acc = np.zeros_like(anchor)
    for k, w in enumerate(central):
        off = k - radius
        if off == 0 or w == 0.0:
            continue
        acc += w * (values[radius + off:n - radius + off] - anchor)
    out[radius:n - radius] = acc

    def apply_row(row, window_start, eval_index):
        a = values[eval_index]
        total = np.zeros_like(a)
        for k, w in enumerate(row):
            j = window_start + k
            if j == eval_index:
                continue
            total += w * (values[j] - a)
        return total

    for i, row in enumerate(low):
        out[i] = apply_row(row, 0, i)
    for i, row in enumerate(high):
        eval_index = n - len(high) + i
        out[eval_index] = apply_row(row, n - len(row), eval_index)
    return out / h**order


def diff(field, order: int = 1):
    """Derivative of a ScalarField or VectorField on its own grid."""
    d = diff_values(field.values, field.grid.h, order)
    return type(field)(field.grid, d)


# ---------------------------------------------------------------------------
# cumulative integration
# ---------------------------------------------------------------------------

def cumint_values(values: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral of raw samples, zero at the first sample.

    Each interval is integrated with the four-point Newton-Cotes rule (the
    cubic that interpolates the interval's two neighbours on each side),
    which matches Simpson's degree of exactness but keeps the per-sample
    error smooth in s: every output value is fourth-order accurate with no
    even/odd-index error alternation, so differentiating the result is
    well behaved.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < 4:
        raise TooFewSamplesError(f"cumulative integration needs at least 4 samples, got {n}")
    inc = np.empty(n - 1)
    inc[1:n - 2] = (-values[0:n - 3] + 13 * values[1:n - 2]
                    + 13 * values[2:n - 1] - values[3:n]) / 24.0
    inc[0] = (9 * values[0] + 19 * values[1] - 5 * values[2] + values[3]) / 24.0
    inc[n - 2] = (values[n - 4] - 5 * values[n - 3] + 19 * values[n - 2]
                  + 9 * values[n - 1]) / 24.0
    out = np.empty(n)
    out[0] = 0.0
    np.cumsum(inc, out=out[1:])
    return out * h


def cumint(field: ScalarField) -> ScalarField:
    """Cumulative integral of a scalar field from the grid origin."""
    return ScalarField(field.grid, cumint_values(field.values, field.grid.h))


# ---------------------------------------------------------------------------
# constancy statistics
# ---------------------------------------------------------------------------

def constancy_values(values: np.ndarray, tol: float, floor: float = 1e-12) -> ConstancyStats:
    """Constancy statistics over a raw sample array (see `constancy`)."""
    if not tol > 0:
        raise MyllerError(f"constancy tolerance must be positive, got {tol}")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise MyllerError("constancy statistics need at least one sample")
    mean = float(values.mean())
    max_abs_dev = float(np.abs(values - mean).max())
    rel_dev = max_abs_dev / max(abs(mean), floor)
    return ConstancyStats(mean, max_abs_dev, rel_dev, rel_dev <= tol)


def constancy(field: ScalarField, tol: float, floor: float = 1e-12) -> ConstancyStats:
    """Decide whether a sampled quantity is constant to a relative tolerance.

    `floor` sets the smallest denominator used for the relative deviation;
    pass the quantity's natural scale when "constant at zero" should count
    as constant (e.g. floor=1.0 for angle cotangents).
    """
    return constancy_values(field.values, tol, floor)


# ---------------------------------------------------------------------------
# orthonormal frames
# ---------------------------------------------------------------------------

def orthonormalize(v1: np.ndarray, v2: np.ndarray, v3: np.ndarray):
    """Gram-Schmidt on (v1, v2); the third vector is replaced by v1 x v2.

    Returns a right-handed orthonormal triple. v3 only provides the caller's
    intent for the third slot; its value never enters the result, which is
    what keeps the repaired frame exactly right-handed.
    """
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    n1 = np.linalg.norm(v1)
    if n1 < 1e-12:
        raise DegenerateInputError(f"first frame vector has norm {n1:.3e}, below 1e-12")
    e1 = v1 / n1
    w2 = v2 - (v2 @ e1) * e1
    n2 = np.linalg.norm(w2)
    if n2 < 1e-12:
        raise DegenerateInputError(
            f"second frame vector is parallel to the first (residual norm {n2:.3e})"
        )
    e2 = w2 / n2
    return e1, e2, np.cross(e1, e2)
