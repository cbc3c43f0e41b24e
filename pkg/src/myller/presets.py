"""Analytic presets and test fixtures.

Four named invariant presets ship with the package so synthesis,
classification and residual checks can run without external data:

* ``circular``  -- constant K1, K2 with a = (1, 0, 0); the curve is a
  circular helix (a planar circle when K2 = 0).
* ``slant``     -- K1 = P cos(Q s), K2 = P sin(Q s), a = (1, 0, 0); the
  alternative invariants are exactly p = P, q = Q, so this is the canonical
  slant/Darboux helix.
* ``nonhelix``  -- K1 = 1, K2 = s: nothing is constant, every verdict is
  negative.
* ``line``      -- K1 = 1, K2 = 0 with a = (cos s, -sin s, 0): a straight
  line carrying a rotating versor, exercising the general (non-tangent)
  coefficient structure.

Closed-form position/versor samplers are provided for the presets that have
them; they are independent of the integrator and serve as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Grid, MyllerError
from .altframe import AltField, assemble_alternative
from .frenet import FrenetField, VersorCurve
from .synthesis import InvariantSpec, synthesize_field

__all__ = [
    "PRESET_NAMES",
    "preset_spec",
    "default_grid",
    "closed_form_circular",
    "closed_form_slant",
    "closed_form_line",
    "alt_invariants",
    "Fixture",
    "make_fixture",
    "FIXTURE_NAMES",
]

PRESET_NAMES = ("circular", "slant", "nonhelix", "line")

#: fixture name -> (preset name, preset params); "circle" is the planar
#: degenerate case of the circular preset
FIXTURE_NAMES = {
    "circular": ("circular", {"K1": 0.5, "K2": 0.5}),
    "slant": ("slant", {"P": 1.0, "Q": 0.25}),
    "line": ("line", {}),
    "circle": ("circular", {"K1": 1.0, "K2": 0.0}),
    "nonhelix": ("nonhelix", {}),
}


def default_grid(h: float = 1e-3, s0: float = 0.0, length: float = 4.0) -> Grid:
    return Grid(s0, h, int(round(length / h)) + 1)


def preset_spec(name: str, grid: Grid, **params) -> InvariantSpec:
    """Invariant spec for a named preset on the given grid."""
    s = grid.s()
    n = grid.n
    ones = np.ones(n)
    zeros = np.zeros(n)
    if name == "circular":
        k1 = float(params.pop("K1", 0.5))
        k2 = float(params.pop("K2", 0.5))
        if params:
            raise MyllerError(f"unknown parameters for preset 'circular': {sorted(params)}")
        if k1 <= 0:
            raise MyllerError(f"preset 'circular' needs K1 > 0, got {k1}")
        return InvariantSpec.from_arrays(grid, np.full(n, k1), np.full(n, k2),
                                         ones, zeros, zeros)
    if name == "slant":
        P = float(params.pop("P", 1.0))
        Q = float(params.pop("Q", 0.25))
        if params:
            raise MyllerError(f"unknown parameters for preset 'slant': {sorted(params)}")
        if P <= 0:
            raise MyllerError(f"preset 'slant' needs P > 0, got {P}")
        if np.any(np.cos(Q * s) <= 0):
            raise MyllerError("preset 'slant' needs |Q s| < pi/2 over the grid so K1 > 0")
        return InvariantSpec.from_arrays(grid, P * np.cos(Q * s), P * np.sin(Q * s),
                                         ones, zeros, zeros)
    if name == "nonhelix":
        if params:
            raise MyllerError(f"preset 'nonhelix' takes no parameters, got {sorted(params)}")
        return InvariantSpec.from_arrays(grid, ones, s.copy(), ones, zeros, zeros)
    if name == "line":
        if params:
            raise MyllerError(f"preset 'line' takes no parameters, got {sorted(params)}")
        return InvariantSpec.from_arrays(grid, ones, zeros,
                                         np.cos(s), -np.sin(s), zeros)
    raise MyllerError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")


# ---------------------------------------------------------------------------
# closed-form oracles
# ---------------------------------------------------------------------------

def closed_form_circular(k1: float, k2: float, grid: Grid):
    """Circular helix with curvature k1 and torsion k2, unit-speed.

    Radius R = k1/c^2 and pitch coefficient b = k2/c^2 with c = sqrt(k1^2+k2^2);
    k2 = 0 degenerates to the planar circle of radius 1/k1. Returns (r, xi)
    sample arrays with xi the unit tangent.
    """
    s = grid.s()
    c2 = k1 * k1 + k2 * k2
    c = np.sqrt(c2)
    R, b = k1 / c2, k2 / c2
    w = c  # turning rate of the tangent projection
    r = np.stack([R * np.cos(w * s), R * np.sin(w * s), b * w * s], axis=1)
    xi = np.stack([-R * w * np.sin(w * s), R * w * np.cos(w * s),
                   np.full_like(s, b * w)], axis=1)
    return r, xi


def closed_form_slant(P: float, Q: float, grid: Grid):
    """Slant-helix preset in closed form (P = 1 only), identity initial pose.

    With p = 1, q = Q constant, the alternative frame rotates rigidly about
    the fixed vector w = Q xi2(0) + D(0) at rate c = sqrt(1 + Q^2); applying
    the phase rotation by Q s inside the (Y, D) plane gives xi1, and the
    position integrates in elementary terms.
    """
    if P != 1.0:
        raise MyllerError("closed-form slant sampler is implemented for P = 1 only")
    s = grid.s()
    c = np.sqrt(1.0 + Q * Q)
    ap, am = c + Q, c - Q
    x = (1 / c) * np.cos(Q * s) * np.sin(c * s) + (Q / c**2) * np.sin(Q * s) * (1 - np.cos(c * s))
    y = -np.cos(Q * s) * np.cos(c * s) - (Q / c) * np.sin(Q * s) * np.sin(c * s)
    z = -(Q / c) * np.cos(Q * s) * np.sin(c * s) + np.sin(Q * s) * (1 + Q * Q * np.cos(c * s)) / c**2
    xi = np.stack([x, y, z], axis=1)
    rx = (am / (2 * c**2 * ap)) * (1 - np.cos(ap * s)) \
        + (ap / (2 * c**2 * am)) * (1 - np.cos(am * s)) \
        + (1 / c**2) * (1 - np.cos(Q * s))
    ry = -(am / (2 * c * ap)) * np.sin(ap * s) - (ap / (2 * c * am)) * np.sin(am * s)
    rz = (Q * am / (2 * c**2 * ap)) * (np.cos(ap * s) - 1) \
        + (Q * ap / (2 * c**2 * am)) * (np.cos(am * s) - 1) \
        + (1 / (c**2 * Q)) * (1 - np.cos(Q * s))
    r = np.stack([rx, ry, rz], axis=1)
    return r, xi


def closed_form_line(grid: Grid):
    """Straight line along x carrying the rotating versor (cos s, sin s, 0)."""
    s = grid.s()
    r = np.stack([s, np.zeros_like(s), np.zeros_like(s)], axis=1)
    xi = np.stack([np.cos(s), np.sin(s), np.zeros_like(s)], axis=1)
    return r, xi


def alt_invariants(name: str, grid: Grid, **params):
    """Closed-form alternative invariants (p, q) for a named preset."""
    s = grid.s()
    n = grid.n
    if name == "circular":
        k1 = float(params.get("K1", 0.5))
        k2 = float(params.get("K2", 0.5))
        return np.full(n, np.hypot(k1, k2)), np.zeros(n)
    if name == "slant":
        P = float(params.get("P", 1.0))
        Q = float(params.get("Q", 0.25))
        return np.full(n, P), np.full(n, Q)
    if name == "nonhelix":
        return np.sqrt(1.0 + s * s), 1.0 / (1.0 + s * s)
    if name == "line":
        return np.ones(n), np.zeros(n)
    raise MyllerError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Fixture:
    """A synthesized preset with everything downstream checks need.

    `field` carries the integrated frames together with the prescribed
    invariant samples (see synthesize_field) and `alt` the corresponding
    closed-form p, q, so identity checks that depend only on the scalar
    invariants see exact analytic samples; frames come from integration.
    """

    name: str
    spec: InvariantSpec
    curve: VersorCurve
    field: FrenetField
    alt: AltField


def make_fixture(name: str, h: float = 1e-3, length: float = 4.0) -> Fixture:
    if name not in FIXTURE_NAMES:
        raise MyllerError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    preset, params = FIXTURE_NAMES[name]
    grid = default_grid(h=h, length=length)
    spec = preset_spec(preset, grid, **params)
    curve, field = synthesize_field(spec)
    p, q = alt_invariants(preset, grid, **params)
    alt = assemble_alternative(field, field.tangent(), p, q)
    return Fixture(name, spec, curve, field, alt)
