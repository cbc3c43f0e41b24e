"""Frame extraction for a sampled versor field along a curve.

A versor field assigns a unit vector xi(s) to each point r(s) of an
arclength-parametrized curve. The frame (xi1, xi2, xi3) is built from the
versor and its derivative; its rotation rates K1, K2 together with the
tangent coefficients a1, a2, a3 form a complete set of invariants:

    xi1' =  K1 xi2
    xi2' = -K1 xi1 + K2 xi3
    xi3' = -K2 xi2
    dr/ds = a1 xi1 + a2 xi2 + a3 xi3,   a1^2 + a2^2 + a3^2 = 1

K1 = |xi'| > 0 and K2 = <xi2', xi3>, the unique torsion consistent with the
system above. When a = (1, 0, 0), the frame reduces to the classical
Frenet-Serret frame of the curve itself and (K1, K2) to its curvature and
torsion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Grid,
    GridMismatchError,
    MyllerError,
    ScalarField,
    VectorField,
    diff_values,
)

__all__ = [
    "CurvatureVanishesError",
    "UnitSpeedError",
    "VersorCurve",
    "FrenetField",
    "extract_frenet",
    "verify_moving_equations",
]


class CurvatureVanishesError(MyllerError):
    """The versor derivative vanishes somewhere, so xi2 is undefined."""


class UnitSpeedError(MyllerError):
    """The curve is not sampled by arclength to the required tolerance."""


def _require_same_grid(grid: Grid, *objs) -> None:
    for obj in objs:
        if obj.grid != grid:
            raise GridMismatchError(f"fields live on different grids: {obj.grid} vs {grid}")


@dataclass(frozen=True, eq=False)
class VersorCurve:
    """Sampled pair (r(s), xi(s)): positions plus a unit vector at each sample."""

    grid: Grid
    r: VectorField
    xi: VectorField

    def __post_init__(self):
        _require_same_grid(self.grid, self.r, self.xi)
        norms = np.linalg.norm(self.xi.values, axis=1)
        worst = float(np.abs(norms - 1.0).max())
        if worst > 1e-8:
            raise MyllerError(
                f"versor field is not unit length: max | |xi| - 1 | = {worst:.3e} (tol 1e-8)"
            )

    @classmethod
    def from_arrays(cls, grid: Grid, r: np.ndarray, xi: np.ndarray) -> "VersorCurve":
        return cls(grid, VectorField(grid, r), VectorField(grid, xi))


@dataclass(frozen=True, eq=False)
class FrenetField:
    """Frame vectors and invariants of a versor field, sampled on a grid."""

    grid: Grid
    xi1: VectorField
    xi2: VectorField
    xi3: VectorField
    K1: ScalarField
    K2: ScalarField
    a1: ScalarField
    a2: ScalarField
    a3: ScalarField

    def __post_init__(self):
        _require_same_grid(self.grid, self.xi1, self.xi2, self.xi3,
                           self.K1, self.K2, self.a1, self.a2, self.a3)
        x1, x2, x3 = self.xi1.values, self.xi2.values, self.xi3.values
        dots = [
            np.abs(np.einsum("ij,ij->i", a, b) - t).max()
            for a, b, t in ((x1, x1, 1.0), (x2, x2, 1.0), (x3, x3, 1.0),
                            (x1, x2, 0.0), (x1, x3, 0.0), (x2, x3, 0.0))
        ]
        if max(dots) > 1e-8:
            raise MyllerError(
                f"frame is not orthonormal: worst Gram deviation {max(dots):.3e} (tol 1e-8)"
            )
        handed = np.abs(np.cross(x1, x2) - x3).max()
        if handed > 1e-8:
            raise MyllerError(
                f"frame is not right-handed: max |xi1 x xi2 - xi3| = {handed:.3e}"
            )
        if np.any(self.K1.values <= 0):
            i = int(np.argmin(self.K1.values))
            raise MyllerError(f"K1 must be positive everywhere; K1[{i}] = {self.K1.values[i]:.3e}")
        unit = self.a1.values**2 + self.a2.values**2 + self.a3.values**2
        worst = float(np.abs(unit - 1.0).max())
        if worst > 1e-6:
            raise MyllerError(
                f"tangent coefficients violate a1^2+a2^2+a3^2 = 1 by {worst:.3e} (tol 1e-6)"
            )

    def tangent(self) -> VectorField:
        """Unit tangent dr/ds reconstructed as a1 xi1 + a2 xi2 + a3 xi3."""
        t = (self.a1.values[:, None] * self.xi1.values
             + self.a2.values[:, None] * self.xi2.values
             + self.a3.values[:, None] * self.xi3.values)
        return VectorField(self.grid, t)


def extract_frenet(curve: VersorCurve, k1_floor: float = 1e-8,
                   unit_speed_tol: float = 1e-4) -> FrenetField:
    """Build the frame and invariants of a sampled versor curve.

    All derivatives are fourth-order finite differences on the curve's grid.
    Raises CurvatureVanishesError when |xi'| drops below `k1_floor` (the
    frame is undefined there) and UnitSpeedError when the positions are not
    arclength-sampled to `unit_speed_tol`.
    """
    grid = curve.grid
    h = grid.h

    tangent = diff_values(curve.r.values, h)
    speed = np.linalg.norm(tangent, axis=1)
    speed_dev = float(np.abs(speed - 1.0).max())
    if speed_dev > unit_speed_tol:
        raise UnitSpeedError(
            f"curve is not arclength-sampled: max | |dr/ds| - 1 | = {speed_dev:.3e} "
            f"(tol {unit_speed_tol:.1e})"
        )

    xi1 = curve.xi.values
    dxi = diff_values(xi1, h)
    K1 = np.linalg.norm(dxi, axis=1)
    if np.min(K1) < k1_floor:
        i = int(np.argmin(K1))
        raise CurvatureVanishesError(
            f"|xi'| = {K1[i]:.3e} at sample {i} (s = {grid.s0 + i * h:.6g}) "
            f"is below the floor {k1_floor:.1e}; the frame is undefined there"
        )
    xi2 = dxi / K1[:, None]
    xi3 = np.cross(xi1, xi2)
    K2 = np.einsum("ij,ij->i", diff_values(xi2, h), xi3)

    return FrenetField(
        grid,
        xi1=VectorField(grid, xi1),
        xi2=VectorField(grid, xi2),
        xi3=VectorField(grid, xi3),
        K1=ScalarField(grid, K1),
        K2=ScalarField(grid, K2),
        a1=ScalarField(grid, np.einsum("ij,ij->i", tangent, xi1)),
        a2=ScalarField(grid, np.einsum("ij,ij->i", tangent, xi2)),
        a3=ScalarField(grid, np.einsum("ij,ij->i", tangent, xi3)),
    )


def verify_moving_equations(field: FrenetField) -> ScalarField:
    """Per-sample worst residual of the three frame equations.

    Returns max over the three equations of the residual vector norm at each
    sample; on exact data this is pure differencing error.
    """
    h = field.grid.h
    x1, x2, x3 = field.xi1.values, field.xi2.values, field.xi3.values
    K1 = field.K1.values[:, None]
    K2 = field.K2.values[:, None]
    r1 = np.linalg.norm(diff_values(x1, h) - K1 * x2, axis=1)
    r2 = np.linalg.norm(diff_values(x2, h) + K1 * x1 - K2 * x3, axis=1)
    r3 = np.linalg.norm(diff_values(x3, h) + K2 * x2, axis=1)
    return ScalarField(field.grid, np.maximum(r1, np.maximum(r2, r3)))
