"""Third-order characterizing ODEs for the frame vectors.

Both frames obey the same skeleton: for basis (e1, e2, e3) with rates (u, v)

    e1' =  u e2,   e2' = -u e1 + v e3,   e3' = -v e2

(Frenet frame: (xi1, xi2, xi3) with (K1, K2); alternative frame:
(xi2, Y, D) with (p, q)). Eliminating the other two vectors turns each
frame vector into the solution of a linear third-order ODE whose
coefficients are rational in u, v and their derivatives. These equations
are identities along every versor field; dropping the zeroth-order term of
the e1/e3 equations (or collapsing the e2 equation to second order)
characterizes the helix classes, which is what `characterization_check`
cross-checks against the classifier verdicts.

Residuals are evaluated in two modes. Exact-substitution expands the target
derivatives through the moving equations, so the residual is a pure check
of the coefficient algebra with differencing entering only through scalar
derivatives; finite-difference mode differentiates the sampled target
directly and validates real data at correspondingly looser tolerances.
Coefficients are built from expanded formulas in u, v, u', v', u'', v''
(never by differencing an intermediate quotient like 1/v, whose derivative
blows up numerically near the validity-mask edge).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    DegenerateInputError,
    Grid,
    GridMismatchError,
    MyllerError,
    ScalarField,
    VectorField,
    constancy_values,
    diff_values,
)
from .altframe import AltField
from .classify import ClassificationReport, classify
from .frenet import FrenetField

__all__ = [
    "AllSamplesDegenerateError",
    "EmptyMaskError",
    "KindTargetMismatchError",
    "OdeKind",
    "OdeCoefficients",
    "build_coefficients",
    "residual",
    "KindResult",
    "evaluate_residual",
    "KindCheck",
    "CharacterizationReport",
    "characterization_check",
    "EDGE_TRIM",
]


class AllSamplesDegenerateError(DegenerateInputError):
    """No sample satisfies the coefficient floors for the requested kind."""


class EmptyMaskError(MyllerError):
    """A residual was requested on coefficients with an empty validity mask."""


class KindTargetMismatchError(MyllerError):
    """The supplied target field is not the frame vector named by the kind."""


class OdeKind(enum.Enum):
    XI2_ALT = "XI2_ALT"
    XI2_ALT_REDUCED = "XI2_ALT_REDUCED"
    Y_FULL = "Y_FULL"
    Y_REDUCED = "Y_REDUCED"
    D_FULL = "D_FULL"
    D_REDUCED = "D_REDUCED"
    XI1_FRENET = "XI1_FRENET"
    XI1_REDUCED = "XI1_REDUCED"
    XI2_FRENET = "XI2_FRENET"
    XI2_FRENET_REDUCED = "XI2_FRENET_REDUCED"
    XI3_FRENET = "XI3_FRENET"
    XI3_REDUCED = "XI3_REDUCED"


# kind -> (frame, target attribute, basis index, coefficient group, reduced, order)
# group "first":  equation of the leading basis vector (e1)
# group "middle": equation of the middle vector (e2); coefficients are the
#                 lambda/rho combinations and need the Wronskian v'u - vu'
# group "third":  equation of the last vector (e3)
# group "second_order_*": the collapsed second-order helix equations
_KIND_TABLE = {
    OdeKind.XI2_ALT:            ("alt", "xi2", 0, "first", False, 3),
    OdeKind.XI2_ALT_REDUCED:    ("alt", "xi2", 0, "first", True, 3),
    OdeKind.Y_FULL:             ("alt", "Y", 1, "middle", False, 3),
    OdeKind.Y_REDUCED:          ("alt", "Y", 1, "second_order_v", False, 2),
    OdeKind.D_FULL:             ("alt", "D", 2, "third", False, 3),
    OdeKind.D_REDUCED:          ("alt", "D", 2, "third", True, 3),
    OdeKind.XI1_FRENET:         ("frenet", "xi1", 0, "first", False, 3),
    OdeKind.XI1_REDUCED:        ("frenet", "xi1", 0, "first", True, 3),
    OdeKind.XI2_FRENET:         ("frenet", "xi2", 1, "middle", False, 3),
    OdeKind.XI2_FRENET_REDUCED: ("frenet", "xi2", 1, "second_order_u", False, 2),
    OdeKind.XI3_FRENET:         ("frenet", "xi3", 2, "third", False, 3),
    OdeKind.XI3_REDUCED:        ("frenet", "xi3", 2, "third", True, 3),
}

# kinds whose reduced equation characterizes a helix class, and which
# classifier verdict they must agree with
_CHARACTERIZING = {
    OdeKind.XI2_ALT_REDUCED: "slant_helix",
    OdeKind.Y_REDUCED: "slant_helix",
    OdeKind.D_REDUCED: "slant_helix",
    OdeKind.XI1_REDUCED: "xi1_helix",
    OdeKind.XI2_FRENET_REDUCED: "xi1_helix",
    OdeKind.XI3_REDUCED: "xi1_helix",
}

# samples dropped from each end of the validity mask: coefficient and
# exact-substitution chains nest up to two derivative levels, and the
# one-sided edge stencils amplify roundoff far above the interior level
EDGE_TRIM = 8

# v (the q-like rate) below this fraction of max(u) is treated as
# identically zero: on re-extracted data a vanishing rate shows up as pure
# differencing jitter, which must not unlock the 1/v coefficients
V_DEGENERATE_REL = 1e-4

# the middle-vector (Wronskian) kinds are singular exactly when v/u is
# constant; the slope test uses this tolerance against unit scale
SLOPE_DEGENERATE_TOL = 1e-4


@dataclass(frozen=True, eq=False)
class OdeCoefficients:
    """Monic coefficient fields c3 e''' + c2 e'' + c1 e' + c0 e = 0.

    Third-order kinds have c3 = 1. The two collapsed helix equations are
    second order in the source equations themselves, so for them c3 = 0 and
    c2 = 1: the same combination formula evaluates every kind. Coefficient
    values outside `mask` are zero-filled placeholders.
    """

    kind: OdeKind
    order: int
    c3: ScalarField
    c2: ScalarField
    c1: ScalarField
    c0: ScalarField
    mask: np.ndarray

    def __post_init__(self):
        grid = self.c3.grid
        for f in (self.c2, self.c1, self.c0):
            if f.grid != grid:
                raise GridMismatchError("coefficient fields live on different grids")
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != (grid.n,):
            raise MyllerError("mask length does not match the coefficient grid")
        object.__setattr__(self, "mask", mask)

    @property
    def grid(self) -> Grid:
        return self.c3.grid

    @property
    def valid_samples(self) -> int:
        return int(self.mask.sum())


def _frame_scalars(kind: OdeKind, field: FrenetField, alt: AltField):
    frame = _KIND_TABLE[kind][0]
    if frame == "alt":
        return alt.p.values, alt.q.values
    return field.K1.values, field.K2.values


def _target_vector(kind: OdeKind, field: FrenetField, alt: AltField) -> VectorField:
    frame, attr = _KIND_TABLE[kind][0], _KIND_TABLE[kind][1]
    return getattr(alt if frame == "alt" else field, attr)


def _scalar_floor_mask(values: np.ndarray, rel: float) -> np.ndarray:
    floor = max(1e-10, rel * float(np.abs(values).max()))
    return np.abs(values) >= floor


def _guarded(den: np.ndarray, ok: np.ndarray) -> np.ndarray:
    return np.where(ok, den, 1.0)


def build_coefficients(kind: OdeKind, field: FrenetField, alt: AltField,
                       scalar_floor_rel: float = 1e-3,
                       wronskian_floor: float | None = None,
                       edge_trim: int = EDGE_TRIM) -> OdeCoefficients:
    """Coefficient fields for one equation kind, with a validity mask.

    The mask keeps samples where every denominator the kind needs (u, v and
    for the middle-vector kinds the Wronskian v'u - vu') is bounded away
    from zero, and drops `edge_trim` samples at each end. Raises
    AllSamplesDegenerateError when nothing survives -- e.g. the middle-vector
    kinds on an exact helix, where the Wronskian vanishes identically.
    """
    if kind not in _KIND_TABLE:
        raise MyllerError(f"unknown equation kind {kind!r}")
    if alt.grid != field.grid:
        raise GridMismatchError("field and alternative field grids differ")
    grid = field.grid
    n = grid.n
    h = grid.h
    _, _, _, group, reduced, order = _KIND_TABLE[kind]

    u, v = _frame_scalars(kind, field, alt)
    u1 = diff_values(u, h)
    v1 = diff_values(v, h)
    # second derivatives are nested first differences so they commute with
    # the derivative chains in the exact-substitution triples: on noisy
    # (re-extracted) data the amplified jitter then cancels in the identity
    u2 = diff_values(u1, h)
    v2 = diff_values(v1, h)

    mask = np.ones(n, dtype=bool)
    if edge_trim:
        mask[:edge_trim] = False
        mask[-edge_trim:] = False

    zeros = np.zeros(n)
    ones = np.ones(n)

    needs_v = group in ("first", "third", "middle", "second_order_v")
    if needs_v and np.abs(v).max() < V_DEGENERATE_REL * np.abs(u).max():
        raise AllSamplesDegenerateError(
            f"{kind.value}: the second rate is zero to working precision "
            f"(max {np.abs(v).max():.3e} vs scale {np.abs(u).max():.3e}); "
            "the equation's coefficients are undefined"
        )

    if group in ("first", "third"):
        ok_u = _scalar_floor_mask(u, scalar_floor_rel)
        ok_v = _scalar_floor_mask(v, scalar_floor_rel)
        mask &= ok_u & ok_v
        su = _guarded(u, ok_u)
        sv = _guarded(v, ok_v)
        if group == "first":
            c2 = -(2 * u1 / su + v1 / sv)
            c1 = -u2 / su + 2 * u1**2 / su**2 + u1 * v1 / (su * sv) + u * u + v * v
            c0 = u * (u1 * v - u * v1) / sv
        else:
            c2 = -(u1 / su + 2 * v1 / sv)
            c1 = -v2 / sv + u1 * v1 / (su * sv) + 2 * v1**2 / sv**2 + u * u + v * v
            c0 = v * (v1 * u - v * u1) / su
        if reduced:
            c0 = zeros
        c3 = ones

    elif group == "middle":
        # singular exactly when v/u is constant (the corresponding helix class)
        inner = slice(edge_trim, n - edge_trim) if edge_trim else slice(None)
        slope = constancy_values((v / u)[inner], SLOPE_DEGENERATE_TOL, floor=1.0)
        if slope.is_constant:
            raise AllSamplesDegenerateError(
                f"{kind.value}: v/u is constant to {SLOPE_DEGENERATE_TOL:.0e} "
                f"(mean {slope.mean:.6g}), so the Wronskian v'u - vu' vanishes "
                "and the coefficients are undefined"
            )
        ok_u = _scalar_floor_mask(u, scalar_floor_rel)
        ok_v = _scalar_floor_mask(v, scalar_floor_rel)
        W = v1 * u - v * u1
        Wp = v2 * u - v * u2
        if wronskian_floor is None:
            wronskian_floor = 1e-8 * max(np.abs(u).max(), np.abs(v).max()) ** 2
        ok_w = np.abs(W) >= wronskian_floor
        mask &= ok_u & ok_v & ok_w
        su = _guarded(u, ok_u)
        sv = _guarded(v, ok_v)
        sw = _guarded(W, ok_w)
        c2 = v1 / sv - Wp / sw - W / (su * sv) - u1 / su
        c1 = (u * u + v * v + u1 * W / (su**2 * sv) - u2 / su
              - u1 * v1 / (su * sv) + u1**2 / su**2 + u1 * Wp / (su * sw))
        c0 = 2 * u * u1 + 2 * v * v1 + (u * u + v * v) * (v1 / sv - Wp / sw) - u * W / sv
        c3 = ones

    elif group == "second_order_v":
        ok_v = _scalar_floor_mask(v, scalar_floor_rel)
        mask &= ok_v
        c3, c2 = zeros, ones
        c1 = -v1 / _guarded(v, ok_v)
        c0 = u * u + v * v

    elif group == "second_order_u":
        ok_u = _scalar_floor_mask(u, scalar_floor_rel)
        mask &= ok_u
        c3, c2 = zeros, ones
        c1 = -u1 / _guarded(u, ok_u)
        c0 = u * u + v * v

    else:  # pragma: no cover
        raise MyllerError(f"unhandled coefficient group {group!r}")

    if not np.any(mask):
        raise AllSamplesDegenerateError(
            f"{kind.value}: no sample satisfies the coefficient floors "
            "(the kind is degenerate on this field)"
        )

    def clean(arr):
        return ScalarField(grid, np.where(mask, arr, 0.0))

    if order == 3:
        c3f = ScalarField(grid, ones)
    else:
        c3f = ScalarField(grid, zeros)
    return OdeCoefficients(kind, order, c3f, clean(c2), clean(c1), clean(c0), mask)


def _exact_triples(u: np.ndarray, v: np.ndarray, h: float, index: int, depth: int):
    """Coefficient triples of the target and its derivatives in the frame basis.

    Starting from the unit triple of the target, each step applies

        (x1, x2, x3) -> (x1' - u x2, x2' + u x1 - v x3, x3' + v x2)

    which is differentiation through the moving equations; scalar derivatives
    are finite differences. Because the basis is orthonormal, the norm of any
    combination equals the euclidean norm of its triple.
    """
    n = len(u)
    T = np.zeros((n, 3))
    T[:, index] = 1.0
    seq = [T]
    for _ in range(depth):
        x1, x2, x3 = T[:, 0], T[:, 1], T[:, 2]
        T = np.stack([
            diff_values(x1, h) - u * x2,
            diff_values(x2, h) + u * x1 - v * x3,
            diff_values(x3, h) + v * x2,
        ], axis=1)
        seq.append(T)
    return seq


def residual(kind: OdeKind, coeffs: OdeCoefficients, target: VectorField,
             mode: str, field: FrenetField, alt: AltField) -> ScalarField:
    """Per-sample residual norm of the kind's equation.

    mode "fd" differentiates the sampled target with the shared stencils;
    mode "exact" expands the derivatives through the moving equations so
    only scalar differencing error enters. Samples outside the coefficient
    mask are reported as zero; consult `coeffs.mask`.
    """
    if mode not in ("fd", "exact"):
        raise MyllerError(f"residual mode must be 'fd' or 'exact', got {mode!r}")
    if coeffs.kind != kind:
        raise MyllerError(f"coefficients were built for {coeffs.kind.value}, not {kind.value}")
    if not np.any(coeffs.mask):
        raise EmptyMaskError(f"{kind.value}: coefficient mask is empty")
    if target.grid != field.grid or coeffs.grid != field.grid:
        raise GridMismatchError("target, coefficients and fields must share one grid")

    expected = _target_vector(kind, field, alt)
    if not np.allclose(target.values, expected.values, atol=1e-6):
        frame, attr = _KIND_TABLE[kind][0], _KIND_TABLE[kind][1]
        raise KindTargetMismatchError(
            f"{kind.value} is an equation for {attr} of the {frame} frame; "
            "the supplied target differs from that vector"
        )

    h = field.grid.h
    order = coeffs.order
    if mode == "fd":
        terms = [target.values]
        for k in (1, 2, 3)[:order]:
            terms.append(diff_values(target.values, h, k))
    else:
        _, _, index, _, _, _ = _KIND_TABLE[kind]
        u, v = _frame_scalars(kind, field, alt)
        terms = _exact_triples(u, v, h, index, order)

    cs = [coeffs.c0.values, coeffs.c1.values, coeffs.c2.values, coeffs.c3.values]
    combo = sum(c[:, None] * t for c, t in zip(cs[:order], terms[:order]))
    combo = combo + terms[order]  # monic top derivative
    res = np.linalg.norm(combo, axis=1)
    return ScalarField(field.grid, np.where(coeffs.mask, res, 0.0))


@dataclass(frozen=True, eq=False)
class KindResult:
    """Residual summary for one kind on one field."""

    kind: OdeKind
    mode: str
    degenerate: bool
    reason: str
    valid_samples: int
    max_residual: float
    scale: float
    normalized: float
    residuals: ScalarField | None
    mask: np.ndarray | None


def _scale(kind: OdeKind, coeffs: OdeCoefficients, target: VectorField,
           mode: str, field: FrenetField, alt: AltField) -> float:
    """Normalization scale: max norm of the equation's top derivative term."""
    h = field.grid.h
    if mode == "fd":
        top = diff_values(target.values, h, coeffs.order)
    else:
        _, _, index, _, _, _ = _KIND_TABLE[kind]
        u, v = _frame_scalars(kind, field, alt)
        top = _exact_triples(u, v, h, index, coeffs.order)[-1]
    norms = np.linalg.norm(top, axis=1)[coeffs.mask]
    return float(norms.max())


def evaluate_residual(kind: OdeKind, field: FrenetField, alt: AltField,
                      mode: str = "exact", **floors) -> KindResult:
    """Build coefficients, evaluate the residual and normalize it.

    Degenerate kinds (empty validity mask) are reported, not raised, so a
    sweep over all kinds stays usable on fields where some equations do not
    apply.
    """
    try:
        coeffs = build_coefficients(kind, field, alt, **floors)
    except AllSamplesDegenerateError as exc:
        return KindResult(kind, mode, True, str(exc), 0, 0.0, 0.0, 0.0, None, None)
    target = _target_vector(kind, field, alt)
    res = residual(kind, coeffs, target, mode, field, alt)
    max_res = float(res.values[coeffs.mask].max())
    scale = _scale(kind, coeffs, target, mode, field, alt)
    normalized = max_res / scale if scale > 0 else np.inf
    return KindResult(kind, mode, False, "", coeffs.valid_samples,
                      max_res, scale, normalized, res, coeffs.mask)


@dataclass(frozen=True)
class KindCheck:
    """Agreement between one reduced equation and the matching helix verdict."""

    kind: OdeKind
    skipped: bool
    reason: str
    max_residual: float
    normalized: float
    small: bool
    verdict: bool
    agree: bool


@dataclass(frozen=True, eq=False)
class CharacterizationReport:
    checks: tuple
    classification: ClassificationReport

    @property
    def all_agree(self) -> bool:
        return all(c.agree for c in self.checks if not c.skipped)


def characterization_check(field: FrenetField, alt: AltField, tol: float = 1e-3,
                           mode: str = "exact") -> CharacterizationReport:
    """Cross-check reduced-equation residuals against classifier verdicts.

    For every characterizing (reduced) kind with a nonempty mask, the
    normalized residual is compared against `tol`; "residual small" must
    coincide with the corresponding helix verdict at the same tolerance.
    Degenerate kinds are skipped with a notice.
    """
    report = classify(field, alt, tol=tol)
    checks = []
    for kind, verdict_attr in _CHARACTERIZING.items():
        result = evaluate_residual(kind, field, alt, mode=mode)
        verdict = bool(getattr(report, verdict_attr))
        if result.degenerate:
            checks.append(KindCheck(kind, True, result.reason, 0.0, 0.0,
                                    False, verdict, True))
            continue
        small = result.normalized <= tol
        checks.append(KindCheck(kind, False, "", result.max_residual,
                                result.normalized, small, verdict,
                                small == verdict))
    return CharacterizationReport(tuple(checks), report)
