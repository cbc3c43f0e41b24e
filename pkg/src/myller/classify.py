"""Helix detection and axes.

Three notions of helix for a versor field, each meaning one frame vector
keeps a constant angle with a fixed direction in space:

* xi1-helix: holds iff K2/K1 is constant.
* slant helix (xi2-helix): holds iff the detector
  sigma = K1^2 / (K1^2 + K2^2)^(3/2) * (K2/K1)' is constant; the constant
  equals cot(theta) up to sign, theta being the angle against the axis.
* Darboux helix: D keeps a constant angle; holds iff p/q is constant, and
  is equivalent to the slant condition since sigma = q/p. When q vanishes
  identically, D is itself a fixed direction and the angle condition holds
  trivially (degenerate general-helix case).

Axes are explicit frame combinations; the sign ambiguity inherited from
the +/- branches is resolved operationally by keeping the branch whose
axis drifts least.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ConstancyStats,
    DegenerateInputError,
    GridMismatchError,
    MyllerError,
    ScalarField,
    VectorField,
    constancy_values,
    diff_values,
)
from .altframe import AltField
from .frenet import FrenetField

__all__ = [
    "ClassificationReport",
    "sigma",
    "classify",
    "slant_axis",
    "darboux_axis",
]

# Constancy statistics for the helix detectors exclude this many samples at
# each end of the grid: the detectors carry up to three nested derivatives,
# whose one-sided edge stencils amplify sample roundoff far above the
# interior level.
EDGE_TRIM = 8

# sigma, p/q and K2/K1 are angle cotangents; deviations are measured against
# unit scale so that "constant at zero" classifies as constant.
COT_SCALE_FLOOR = 1.0

# q below this fraction of max(p) is treated as identically zero (degenerate
# general helix): extracted q carries differencing jitter, so an absolute
# floor cannot separate true zero from noise.
Q_DEGENERATE_REL = 1e-4


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    """Helix verdicts, detector statistics, angles and axes for one field."""

    tol: float
    xi1_helix: bool
    xi1_stats: ConstancyStats
    slant_helix: bool
    slant_stats: ConstancyStats
    darboux_helix: bool
    darboux_degenerate: bool
    darboux_stats: ConstancyStats | None
    theta: float
    phi: float
    axis_d: VectorField
    axis_d_sign: int
    axis_d_drift: float
    axis_l: VectorField
    axis_l_sign: int
    axis_l_drift: float
    sigma_f_product_dev: float


def sigma(field: FrenetField, p_floor: float = 1e-10) -> ScalarField:
    """Slant-helix detector sigma = K1^2 / (K1^2+K2^2)^(3/2) * (K2/K1)'.

    Returned signed; it equals q/p, so its sign tracks the turning direction
    of (K1, K2). The derivative is a fourth-order finite difference.
    """
    K1, K2 = field.K1.values, field.K2.values
    p = np.hypot(K1, K2)
    if np.min(p) < p_floor:
        i = int(np.argmin(p))
        raise DegenerateInputError(
            f"(K1, K2) vanishes at sample {i} (p = {p[i]:.3e} < {p_floor:.1e}); "
            "the detector is undefined there"
        )
    d_ratio = diff_values(K2 / K1, field.grid.h)
    return ScalarField(field.grid, K1**2 / p**3 * d_ratio)


def slant_axis(field: FrenetField, theta: float, sign: int) -> VectorField:
    """Candidate slant-helix axis for one sign branch.

    sign=+1 takes the upper branch of the +/- in

        d = -/+ sin(theta) K2/p xi1 + cos(theta) xi2 -/+ sin(theta) K1/p xi3

    i.e. sign=+1 means the minus sign. Unit norm by construction.
    """
    if sign not in (1, -1):
        raise MyllerError(f"sign branch must be +1 or -1, got {sign}")
    K1, K2 = field.K1.values, field.K2.values
    p = np.hypot(K1, K2)
    if np.min(p) <= 0:
        raise DegenerateInputError("(K1, K2) vanishes; the axis formula is undefined")
    lam = -sign * np.sin(theta)
    d = (lam * (K2 / p))[:, None] * field.xi1.values \
        + np.cos(theta) * field.xi2.values \
        + (lam * (K1 / p))[:, None] * field.xi3.values
    return VectorField(field.grid, d)


def darboux_axis(field: FrenetField, phi: float, sign: int) -> VectorField:
    """Candidate Darboux-helix axis for one sign branch.

        l = cos(phi) K2/p xi1 -/+ sin(phi) xi2 + cos(phi) K1/p xi3

    sign=+1 means the minus sign on the xi2 term. With phi = 0 this is the
    normalized Darboux vector itself. Unit norm by construction.
    """
    if sign not in (1, -1):
        raise MyllerError(f"sign branch must be +1 or -1, got {sign}")
    K1, K2 = field.K1.values, field.K2.values
    p = np.hypot(K1, K2)
    if np.min(p) <= 0:
        raise DegenerateInputError("(K1, K2) vanishes; the axis formula is undefined")
    ell = (np.cos(phi) * (K2 / p))[:, None] * field.xi1.values \
        + (-sign * np.sin(phi)) * field.xi2.values \
        + (np.cos(phi) * (K1 / p))[:, None] * field.xi3.values
    return VectorField(field.grid, ell)


def _drift(axis: VectorField) -> float:
    return float(np.linalg.norm(axis.values - axis.values[0], axis=1).max())


def _best_branch(builder, field: FrenetField, angle: float):
    candidates = [(builder(field, angle, s), s) for s in (1, -1)]
    drifts = [_drift(a) for a, _ in candidates]
    best = int(np.argmin(drifts))
    axis, sign = candidates[best]
    return axis, sign, drifts[best]


def classify(field: FrenetField, alt: AltField, tol: float = 1e-6,
             edge_trim: int = EDGE_TRIM) -> ClassificationReport:
    """Classify a versor field as xi1-helix / slant helix / Darboux helix.

    Verdicts come from constancy of K2/K1, sigma and p/q respectively, each
    at relative tolerance `tol` against unit scale, computed on the interior
    samples (see EDGE_TRIM). The Darboux detector p/q is only meaningful
    when q stays away from zero; fields with q ~ 0 are flagged
    darboux_degenerate (D itself is a fixed direction) and classified as
    Darboux helices trivially.
    """
    if alt.grid != field.grid:
        raise GridMismatchError("field and alternative field grids differ")
    if not tol > 0:
        raise MyllerError(f"classification tolerance must be positive, got {tol}")

    n = field.grid.n
    inner = slice(edge_trim, n - edge_trim)
    ratio = field.K2.values / field.K1.values
    sig = sigma(field)
    xi1_stats = constancy_values(ratio[inner], tol, floor=COT_SCALE_FLOOR)
    slant_stats = constancy_values(sig.values[inner], tol, floor=COT_SCALE_FLOOR)

    p, q = alt.p.values, alt.q.values
    degenerate = bool(np.abs(q).max() < Q_DEGENERATE_REL * p.max())
    if degenerate:
        darboux_stats = None
        darboux = True
        product_dev = 0.0
        phi = 0.0
    else:
        q_floor = 1e-10
        valid = np.abs(q) > q_floor
        inner_valid = np.zeros(n, dtype=bool)
        inner_valid[inner] = True
        inner_valid &= valid
        if not np.any(inner_valid):
            raise DegenerateInputError(
                "q vanishes on every interior sample; the Darboux detector p/q is undefined"
            )
        f = np.where(valid, p, 0.0) / np.where(valid, q, 1.0)
        darboux_stats = constancy_values(f[inner_valid], tol, floor=COT_SCALE_FLOOR)
        darboux = darboux_stats.is_constant
        # sigma * (p/q) is identically +1; record the worst pointwise deviation.
        product = sig.values[valid] * f[valid]
        product_dev = float(np.abs(product - 1.0).max())
        phi = float(np.arctan2(1.0, abs(darboux_stats.mean)))

    theta = float(np.arctan2(1.0, abs(slant_stats.mean)))

    axis_d, d_sign, d_drift = _best_branch(slant_axis, field, theta)
    axis_l, l_sign, l_drift = _best_branch(darboux_axis, field, phi)

    return ClassificationReport(
        tol=tol,
        xi1_helix=xi1_stats.is_constant,
        xi1_stats=xi1_stats,
        slant_helix=slant_stats.is_constant,
        slant_stats=slant_stats,
        darboux_helix=darboux,
        darboux_degenerate=degenerate,
        darboux_stats=darboux_stats,
        theta=theta,
        phi=phi,
        axis_d=axis_d,
        axis_d_sign=d_sign,
        axis_d_drift=d_drift,
        axis_l=axis_l,
        axis_l_sign=l_sign,
        axis_l_drift=l_drift,
        sigma_f_product_dev=product_dev,
    )
