import numpy as np
import pytest

from myller.core import Grid, GridMismatchError
from myller.frenet import VersorCurve, extract_frenet
from myller.presets import (
    closed_form_circular,
    closed_form_line,
    closed_form_slant,
    default_grid,
    preset_spec,
)
from myller.synthesis import (
    FramePose,
    InvalidSpecError,
    InvariantSpec,
    extract_after_synthesize,
    rigid_motion_distance,
    synthesize,
)


def rotation_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotated_pose(angle=0.93, shift=(3.0, -1.0, 2.0)):
    R = rotation_z(angle)
    return FramePose(np.array(shift), np.stack([R @ e for e in np.eye(3)]))


def apply_motion(curve, R, t):
    return VersorCurve.from_arrays(curve.grid,
                                   curve.r.values @ R.T + t,
                                   curve.xi.values @ R.T)


# ---------------------------------------------------------------------------
# spec validation
# ---------------------------------------------------------------------------

def test_invalid_spec_nonpositive_k1():
    grid = Grid(0.0, 1e-2, 11)
    n = grid.n
    with pytest.raises(InvalidSpecError, match="K1"):
        InvariantSpec.from_arrays(grid, np.zeros(n), np.zeros(n),
                                  np.ones(n), np.zeros(n), np.zeros(n))


def test_invalid_spec_tangent_norm():
    grid = Grid(0.0, 1e-2, 11)
    n = grid.n
    with pytest.raises(InvalidSpecError, match="a1"):
        InvariantSpec.from_arrays(grid, np.ones(n), np.zeros(n),
                                  np.full(n, 0.9487), np.zeros(n), np.zeros(n))


def test_pose_validation():
    with pytest.raises(Exception):
        FramePose(np.zeros(3), np.eye(3) * 1.1)


# ---------------------------------------------------------------------------
# synthesis against closed forms
# ---------------------------------------------------------------------------

def test_constant_spec_gives_circular_helix():
    grid = default_grid()
    spec = preset_spec("circular", grid, K1=0.5, K2=0.5)
    got = synthesize(spec)
    r, xi = closed_form_circular(0.5, 0.5, grid)
    want = VersorCurve.from_arrays(grid, r, xi)
    assert rigid_motion_distance(got, want) <= 1e-6


def test_line_spec_matches_closed_form():
    grid = default_grid()
    spec = preset_spec("line", grid)
    got = synthesize(spec)
    r, xi = closed_form_line(grid)
    want = VersorCurve.from_arrays(grid, r, xi)
    assert rigid_motion_distance(got, want) <= 1e-6
    # re-extraction reproduces the prescribed invariants
    field = extract_frenet(got)
    s = grid.s()
    assert np.abs(field.K1.values - 1.0).max() <= 1e-6
    assert np.abs(field.K2.values).max() <= 1e-6
    assert np.abs(field.a1.values - np.cos(s)).max() <= 1e-6


def test_slant_spec_matches_closed_form():
    grid = default_grid()
    spec = preset_spec("slant", grid)
    got = synthesize(spec)
    r, xi = closed_form_slant(1.0, 0.25, grid)
    want = VersorCurve.from_arrays(grid, r, xi)
    assert rigid_motion_distance(got, want) <= 1e-6


def test_output_is_unit_speed():
    grid = default_grid()
    curve = synthesize(preset_spec("nonhelix", grid))
    from myller.core import diff_values
    speed = np.linalg.norm(diff_values(curve.r.values, grid.h), axis=1)
    assert np.abs(speed - 1.0).max() <= 1e-8


def test_output_frames_orthonormal():
    grid = default_grid()
    from myller.synthesis import synthesize_field
    _, field = synthesize_field(preset_spec("slant", grid))
    for a, b in ((field.xi1, field.xi2), (field.xi1, field.xi3), (field.xi2, field.xi3)):
        dots = np.einsum("ij,ij->i", a.values, b.values)
        assert np.abs(dots).max() <= 1e-12


# ---------------------------------------------------------------------------
# rigid motion distance
# ---------------------------------------------------------------------------

def test_distance_to_self_is_zero():
    curve = synthesize(preset_spec("circular", default_grid(h=1e-2)))
    assert rigid_motion_distance(curve, curve) <= 1e-14


def test_distance_recovers_known_motion():
    curve = synthesize(preset_spec("slant", default_grid(h=1e-2)))
    moved = apply_motion(curve, rotation_z(np.pi / 2), np.array([1.0, 2.0, 3.0]))
    assert rigid_motion_distance(curve, moved) <= 1e-12


def test_distance_grid_mismatch():
    a = synthesize(preset_spec("circular", default_grid(h=1e-2)))
    b = synthesize(preset_spec("circular", default_grid(h=2e-2)))
    with pytest.raises(GridMismatchError):
        rigid_motion_distance(a, b)


def test_round_trip_helix():
    grid = default_grid()
    spec = preset_spec("circular", grid, K1=0.5, K2=0.5)
    curve = synthesize(spec)
    field = extract_frenet(curve)
    respec = InvariantSpec(grid, field.K1, field.K2, field.a1, field.a2, field.a3)
    again = synthesize(respec)
    assert rigid_motion_distance(curve, again) <= 1e-6


# ---------------------------------------------------------------------------
# uniqueness up to motion, equivariance
# ---------------------------------------------------------------------------

def test_two_poses_differ_by_rigid_motion():
    spec = preset_spec("slant", default_grid())
    a = synthesize(spec)
    b = synthesize(spec, rotated_pose())
    assert rigid_motion_distance(a, b) <= 1e-8


def test_equivariance():
    # g . synthesize(spec, identity) == synthesize(spec, g . identity)
    spec = preset_spec("nonhelix", default_grid(h=2e-3))
    R = rotation_z(0.37)
    t = np.array([0.5, 0.25, -1.0])
    base = synthesize(spec)
    moved = synthesize(spec, FramePose(t, np.stack([R @ e for e in np.eye(3)])))
    direct = apply_motion(base, R, t)
    gap = np.abs(direct.r.values - moved.r.values).max() \
        + np.abs(direct.xi.values - moved.xi.values).max()
    assert gap <= 1e-10


# ---------------------------------------------------------------------------
# round-trip error reports
# ---------------------------------------------------------------------------

def test_round_trip_reports(fixtures):
    for name, fx in fixtures.items():
        report = extract_after_synthesize(fx.spec)
        assert report.max_relative_error <= 1e-5, name


def test_round_trip_constant_spec_tight():
    report = extract_after_synthesize(preset_spec("circular", default_grid(), K1=0.5, K2=0.5))
    assert report.max_relative_error <= 1e-6


def test_round_trip_binormal_tangent():
    # alpha = xi3: the tangent is orthogonal to the span of xi1, xi2
    grid = default_grid()
    n = grid.n
    spec = InvariantSpec.from_arrays(grid, np.ones(n), np.full(n, 0.3),
                                     np.zeros(n), np.zeros(n), np.ones(n))
    report = extract_after_synthesize(spec)
    assert report.max_relative_error <= 1e-5


def test_round_trip_fourth_order_convergence():
    # interior recovery error of the least-trivial invariant; the global max
    # picks up an O(h^3) edge term from differencing near one-sided stencils
    errs = {}
    for h in (4e-3, 2e-3):
        from myller.presets import make_fixture
        fx = make_fixture("nonhelix", h=h)
        rec = extract_frenet(fx.curve)
        errs[h] = np.abs(rec.K2.values - fx.spec.K2.values)[8:-8].max()
    assert 10.0 <= errs[4e-3] / errs[2e-3] <= 22.0
