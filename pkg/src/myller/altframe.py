"""Alternative frame (xi2, Y, D) and its invariants p, q.

D is the normalized Darboux vector (K2 xi1 + K1 xi3) / sqrt(K1^2 + K2^2) —
the instantaneous rotation axis of the frame — and Y = xi2' / |xi2'|. The
triple is orthonormal and right-handed with moving equations

    xi2' =  p Y
    Y'   = -p xi2 + q D
    D'   = -q Y

where p = sqrt(K1^2 + K2^2) and q = K1^2 / (K1^2 + K2^2) * (K2/K1)'. The
curvature pairs are linked through a phase angle: K1 = p cos(phi),
K2 = p sin(phi) with phi' = q, and the tangent coefficients of the two
frames are related by the same rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DegenerateInputError,
    Grid,
    GridMismatchError,
    MyllerError,
    ScalarField,
    VectorField,
    cumint_values,
    diff_values,
)
from .frenet import FrenetField

__all__ = [
    "DegenerateDarbouxError",
    "AltField",
    "CurvaturePhase",
    "assemble_alternative",
    "extract_alternative",
    "verify_alt_moving_equations",
    "curvature_relations",
    "coefficient_relations",
    "angle_rates",
]


class DegenerateDarbouxError(DegenerateInputError):
    """(K1, K2) vanishes somewhere, so the alternative frame is undefined."""


@dataclass(frozen=True, eq=False)
class AltField:
    """Alternative frame vectors and invariants sampled on a grid."""

    grid: Grid
    xi2: VectorField
    Y: VectorField
    D: VectorField
    p: ScalarField
    q: ScalarField
    d1: ScalarField
    d2: ScalarField
    d3: ScalarField

    def __post_init__(self):
        for f in (self.xi2, self.Y, self.D, self.p, self.q, self.d1, self.d2, self.d3):
            if f.grid != self.grid:
                raise GridMismatchError("alternative-frame fields live on different grids")
        u, v, w = self.xi2.values, self.Y.values, self.D.values
        dots = [
            np.abs(np.einsum("ij,ij->i", a, b) - t).max()
            for a, b, t in ((u, u, 1.0), (v, v, 1.0), (w, w, 1.0),
                            (u, v, 0.0), (u, w, 0.0), (v, w, 0.0))
        ]
        if max(dots) > 1e-8:
            raise MyllerError(
                f"alternative frame is not orthonormal: worst deviation {max(dots):.3e}"
            )
        if np.abs(np.cross(u, v) - w).max() > 1e-8:
            raise MyllerError("alternative frame is not right-handed (D != xi2 x Y)")
        if np.any(self.p.values <= 0):
            raise MyllerError("p must be positive everywhere")
        unit = self.d1.values**2 + self.d2.values**2 + self.d3.values**2
        worst = float(np.abs(unit - 1.0).max())
        if worst > 1e-6:
            raise MyllerError(
                f"coefficients violate d1^2+d2^2+d3^2 = 1 by {worst:.3e} (tol 1e-6)"
            )


@dataclass(frozen=True, eq=False)
class CurvaturePhase:
    """Phase angle linking (K1, K2) to (p, q).

    phi(s) = phi0 + integral of q from the grid origin; phi0 is fixed by
    K1(s0) = p(s0) cos(phi0), K2(s0) = p(s0) sin(phi0).
    """

    phi0: float
    cumulative_q: ScalarField

    def phi(self) -> ScalarField:
        return ScalarField(self.cumulative_q.grid, self.phi0 + self.cumulative_q.values)


def assemble_alternative(field: FrenetField, tangent: VectorField,
                         p: np.ndarray, q: np.ndarray,
                         p_floor: float = 1e-10) -> AltField:
    """Assemble the alternative frame from given invariant samples p, q.

    Y comes from differencing xi2 and D from the Darboux formula; the
    caller supplies p and q (extract_alternative computes them from K1, K2,
    test fixtures may pass exact closed-form samples instead).
    """
    if tangent.grid != field.grid:
        raise GridMismatchError("tangent is sampled on a different grid than the field")
    grid = field.grid
    K1, K2 = field.K1.values, field.K2.values
    if np.min(p) < p_floor:
        i = int(np.argmin(p))
        raise DegenerateDarbouxError(
            f"(K1, K2) = ({K1[i]:.3e}, {K2[i]:.3e}) at sample {i} gives "
            f"p = {p[i]:.3e}, below the floor {p_floor:.1e}"
        )
    dxi2 = diff_values(field.xi2.values, grid.h)
    Y = dxi2 / np.linalg.norm(dxi2, axis=1)[:, None]
    D = (K2[:, None] * field.xi1.values + K1[:, None] * field.xi3.values) / p[:, None]
    t = tangent.values
    return AltField(
        grid,
        xi2=field.xi2,
        Y=VectorField(grid, Y),
        D=VectorField(grid, D),
        p=ScalarField(grid, p),
        q=ScalarField(grid, q),
        d1=ScalarField(grid, np.einsum("ij,ij->i", t, field.xi2.values)),
        d2=ScalarField(grid, np.einsum("ij,ij->i", t, Y)),
        d3=ScalarField(grid, np.einsum("ij,ij->i", t, D)),
    )


def extract_alternative(field: FrenetField, tangent: VectorField,
                        p_floor: float = 1e-10) -> AltField:
    """Build the alternative frame from a frame field and the curve tangent.

    q is computed from the closed formula in K1, K2 and their derivative,
    not by differencing D; `angle_rates` provides the independent check.
    """
    K1, K2 = field.K1.values, field.K2.values
    p = np.hypot(K1, K2)
    q = (K1**2 / p**2) * diff_values(K2 / K1, field.grid.h)
    return assemble_alternative(field, tangent, p, q, p_floor=p_floor)


def verify_alt_moving_equations(alt: AltField) -> ScalarField:
    """Per-sample worst residual of the alternative-frame moving equations."""
    h = alt.grid.h
    x2, Y, D = alt.xi2.values, alt.Y.values, alt.D.values
    p = alt.p.values[:, None]
    q = alt.q.values[:, None]
    r1 = np.linalg.norm(diff_values(x2, h) - p * Y, axis=1)
    r2 = np.linalg.norm(diff_values(Y, h) + p * x2 - q * D, axis=1)
    r3 = np.linalg.norm(diff_values(D, h) + q * Y, axis=1)
    return ScalarField(alt.grid, np.maximum(r1, np.maximum(r2, r3)))


def curvature_relations(alt: AltField, field: FrenetField) -> tuple[CurvaturePhase, float]:
    """Check K1 = p cos(phi), K2 = p sin(phi) with phi = phi0 + cumint(q).

    Returns the phase and the max over samples of
    |K1 - p cos phi| + |K2 - p sin phi|.
    """
    if alt.grid != field.grid:
        raise GridMismatchError("alternative field and frame field grids differ")
    K1, K2 = field.K1.values, field.K2.values
    phi0 = float(np.arctan2(K2[0], K1[0]))
    cum_q = cumint_values(alt.q.values, alt.grid.h)
    phi = phi0 + cum_q
    p = alt.p.values
    err = np.abs(K1 - p * np.cos(phi)) + np.abs(K2 - p * np.sin(phi))
    phase = CurvaturePhase(phi0, ScalarField(alt.grid, cum_q))
    return phase, float(err.max())


def coefficient_relations(alt: AltField, field: FrenetField,
                          phase: CurvaturePhase) -> float:
    """Residual of the tangent-coefficient change of basis between the frames.

    With phi the curvature phase, (Y, D) is the rotation of (xi1, xi3) by phi
    in their common plane, so

        a1 = -d2 cos(phi) + d3 sin(phi)
        a2 =  d1
        a3 =  d2 sin(phi) + d3 cos(phi)

    The three b-coefficients appearing alongside these relations in the
    source material are read as the alternative-frame tangent coefficients
    d1, d2, d3 — the only frame coefficients defined there. Returns the max
    over samples of the three residual magnitudes.
    """
    if alt.grid != field.grid:
        raise GridMismatchError("alternative field and frame field grids differ")
    phi = phase.phi().values
    c, s = np.cos(phi), np.sin(phi)
    d1, d2, d3 = alt.d1.values, alt.d2.values, alt.d3.values
    r1 = np.abs(field.a1.values - (-d2 * c + d3 * s))
    r2 = np.abs(field.a2.values - d1)
    r3 = np.abs(field.a3.values - (d2 * s + d3 * c))
    return float(np.maximum(r1, np.maximum(r2, r3)).max())


def _successive_angles(vectors: np.ndarray) -> np.ndarray:
    a, b = vectors[:-1], vectors[1:]
    cross = np.linalg.norm(np.cross(a, b), axis=1)
    dot = np.einsum("ij,ij->i", a, b)
    return np.arctan2(cross, dot)


def angle_rates(alt: AltField) -> tuple[ScalarField, ScalarField]:
    """First-order estimates of |p| and |q| from angles between successive frames.

    p is the rotation rate of xi2 and q the rotation rate of D; both are
    estimated as angle(v(s_i), v(s_{i+1})) / h, an O(h)-accurate unsigned
    rate. The last sample copies its neighbour.
    """
    h = alt.grid.h
    p_est = np.empty(alt.grid.n)
    q_est = np.empty(alt.grid.n)
    p_est[:-1] = _successive_angles(alt.xi2.values) / h
    q_est[:-1] = _successive_angles(alt.D.values) / h
    p_est[-1] = p_est[-2]
    q_est[-1] = q_est[-2]
    return ScalarField(alt.grid, p_est), ScalarField(alt.grid, q_est)
