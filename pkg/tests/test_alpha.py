import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from chargekin.alpha import (
    alpha_constraints,
    alpha_fk,
    alpha_ik,
    alpha_jacobians,
    assembly_of,
    singularity_margin,
)
from chargekin.design import JointVector, PlanarPose, WorkingMode, ZOE_DESIGN
from chargekin.errors import ConsistencyError, NoAssemblyError, StrokeError, UnreachableError

from conftest import make_design

P = ZOE_DESIGN
UPPER = WorkingMode(-1, -1, 1)
LOWER = WorkingMode(-1, -1, -1)


def rail_roots(cx, cy, L, rail_y=0.0):
    """Abscissae where a circle of radius L about (cx, cy) crosses the rail line."""
    return np.sort(np.roots([1.0, -2 * cx, cx * cx + (rail_y - cy) ** 2 - L * L]).real)


def test_constraints_arms_horizontal():
    assert alpha_constraints(P, PlanarPose(612, 0), JointVector(0, 76)) == (0.0, 0.0)


def test_constraints_direct_arithmetic():
    f1, f2 = alpha_constraints(P, PlanarPose(612, 0), JointVector(10, 76))
    assert f1 == 522**2 - 532**2 == -10540
    assert f2 == 0


def test_ik_arms_horizontal():
    q = alpha_ik(P, PlanarPose(612, 0))
    assert (q.rho1, q.rho2) == (0.0, 76.0)


def test_ik_against_circle_rail_intersection():
    x, y = 570.0, 335.0
    # left joint A: leftmost crossing of the circle about B; right joint E: rightmost about C
    a = rail_roots(x - P.L3 / 2, y, P.L)[0]
    e = rail_roots(x + P.L3 / 2, y, P.L)[1]
    q = alpha_ik(P, PlanarPose(x, y))
    assert q.rho1 == pytest.approx(a - P.e1x, abs=1e-9)
    assert q.rho2 == pytest.approx(P.L2 - e - P.e2x, abs=1e-9)
    assert round(q.rho1, 3) == 76.722
    assert round(q.rho2, 3) == 236.722


def test_ik_unreachable():
    with pytest.raises(UnreachableError, match=r"\|y-e1y\| exceeds L"):
        alpha_ik(P, PlanarPose(600, 540))


def test_ik_stroke_error_is_distinct():
    with pytest.raises(StrokeError) as exc:
        alpha_ik(P, PlanarPose(570, 0))
    assert not isinstance(exc.value, UnreachableError)
    assert exc.value.actuator == "rho1"


def test_ik_uses_e2y_for_right_arm():
    p = make_design(e1y=10.0, e2y=-25.0)
    pose = PlanarPose(650.0, 200.0)
    q = alpha_ik(p, pose, check_stroke=False)
    f1, f2 = alpha_constraints(p, pose, q)
    assert abs(f1) < 1e-9 and abs(f2) < 1e-9


def test_fk_tangent_circles():
    for mode in (UPPER, LOWER):
        v = alpha_fk(P, JointVector(38, 38), mode)
        assert (v.x, v.y) == (650.0, 0.0)


def test_fk_symmetric_upper():
    v = alpha_fk(P, JointVector(238, 238), UPPER)
    assert v.x == pytest.approx(650.0, abs=1e-12)
    assert v.y == pytest.approx(math.sqrt(532**2 - 332**2), abs=1e-12)
    assert round(v.y, 3) == 415.692
    f1, f2 = alpha_constraints(P, v, JointVector(238, 238))
    assert abs(f1) < 1e-9 and abs(f2) < 1e-9


def test_fk_lower_is_mirror():
    v = alpha_fk(P, JointVector(238, 238), LOWER)
    assert v.y == pytest.approx(-math.sqrt(532**2 - 332**2), abs=1e-12)


def test_fk_disjoint_circles():
    p = make_design(L2=2000.0)
    with pytest.raises(NoAssemblyError):
        alpha_fk(p, JointVector(0, 0))


@pytest.mark.parametrize("q", [(100, 50), (238, 238), (400, 10), (0, 300)])
def test_fk_both_assemblies_satisfy_constraints(q):
    jv = JointVector(*q)
    for mode in (UPPER, LOWER):
        f1, f2 = alpha_constraints(P, alpha_fk(P, jv, mode), jv)
        assert abs(f1) < 1e-9 and abs(f2) < 1e-9


def reachable_pose(p, rng):
    while True:
        x = rng.uniform(350, 950)
        y = rng.uniform(-p.L, p.L)
        try:
            return PlanarPose(x, y), alpha_ik(p, PlanarPose(x, y))
        except (UnreachableError, StrokeError):
            pass


def x_interval(p, y):
    """Reachable abscissae of V at height y (accessible branches)."""
    s1 = math.sqrt(p.L**2 - (y - p.e1y) ** 2)
    s2 = math.sqrt(p.L**2 - (y - p.e2y) ** 2)
    lo = max(p.e1x + p.L3 / 2 + p.rho1_min + s1, p.L2 - p.L3 / 2 - p.e2x - p.rho2_max - s2)
    hi = min(p.e1x + p.L3 / 2 + p.rho1_max + s1, p.L2 - p.L3 / 2 - p.e2x - p.rho2_min - s2)
    return lo, hi


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(y=st.floats(-527, 527), frac=st.floats(0, 1))
def test_roundtrip_property(y, frac):
    lo, hi = x_interval(P, y)
    assume(hi > lo)
    pose = PlanarPose(lo + frac * (hi - lo), y)
    q = alpha_ik(P, pose, check_stroke=False)
    # FK is ill-conditioned at the parallel singularity; keep clear of it
    assume(singularity_margin(P, pose, q)[0] > 1e-3)
    f1, f2 = alpha_constraints(P, pose, q)
    assert abs(f1) <= 1e-9 and abs(f2) <= 1e-9
    v = alpha_fk(P, q, WorkingMode(-1, -1, assembly_of(P, pose, q)))
    assert math.hypot(v.x - pose.x, v.y - pose.y) <= 1e-9


# -- Jacobians -------------------------------------------------------------------


def half_constraints(p, x, y, r1, r2):
    f1, f2 = alpha_constraints(p, PlanarPose(x, y), JointVector(r1, r2))
    return np.array([f1, f2]) / 2


def fd_jacobians(p, pose, q, h=1e-6):
    args = np.array([pose.x, pose.y, q.rho1, q.rho2])
    cols = []
    for k in range(4):
        d = np.zeros(4)
        d[k] = h
        cols.append((half_constraints(p, *(args + d)) - half_constraints(p, *(args - d))) / (2 * h))
    J = np.column_stack(cols)
    return J[:, :2], J[:, 2:]


def test_jacobian_parallel_singular_posture():
    J = alpha_jacobians(P, PlanarPose(612, 0), JointVector(0, 76))
    np.testing.assert_array_equal(J.A, [[532, 0], [-532, 0]])
    assert J.detA == 0.0


def test_jacobian_symmetric_posture_matches_fd():
    y = math.sqrt(532**2 - 332**2)
    pose, q = PlanarPose(650, y), JointVector(238, 238)
    J = alpha_jacobians(P, pose, q)
    A_fd, B_fd = fd_jacobians(P, pose, q)
    assert np.abs(J.A - A_fd).max() / np.abs(J.A).max() <= 1e-5
    assert np.abs(J.B - B_fd).max() / np.abs(J.B).max() <= 1e-5
    # symmetric: u1x = u2x = 332, so det A = 2 * 332 * y
    assert J.detA == pytest.approx(2 * 332 * y, rel=1e-12)
    assert J.detB == pytest.approx(332 * 332, rel=1e-12)


def test_det_a_changes_sign_across_flat_posture():
    dets = []
    for y in (-1.0, 1.0):
        pose = PlanarPose(650, y)
        dets.append(alpha_jacobians(P, pose, alpha_ik(P, pose)).detA)
    assert dets[0] < 0 < dets[1]


def test_serial_singularity_left_arm_perpendicular():
    # arm vertical: V straight above A
    pose = PlanarPose(400.0, P.L)
    q = alpha_ik(P, pose, check_stroke=False)
    J = alpha_jacobians(P, pose, q)
    assert J.B[0, 0] == 0.0 and J.detB == 0.0
    assert singularity_margin(P, pose, q)[1] == 0.0


def test_jacobian_rejects_inconsistent_pair():
    with pytest.raises(ConsistencyError):
        alpha_jacobians(P, PlanarPose(612, 0), JointVector(10, 76))


def test_margin_flat_posture_is_zero():
    par, ser = singularity_margin(P, PlanarPose(612, 0), JointVector(0, 76))
    assert par == 0.0
    assert ser == 1.0


def test_margin_interior_point():
    pose = PlanarPose(570, 335)
    par, ser = singularity_margin(P, pose, alpha_ik(P, pose))
    assert par > 0.05 and ser > 0.05
    # frozen: 335 * 2 * sqrt(532^2 - 335^2) / 532^2 and sqrt(532^2 - 335^2) / 532
    s = math.sqrt(532**2 - 335**2)
    assert par == pytest.approx(2 * 335 * s / 532**2, rel=1e-12)
    assert par == pytest.approx(0.978350, abs=1e-6)
    assert ser == pytest.approx(0.776839, abs=1e-6)


def test_jacobian_predicts_fk_displacement():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 200:
        pose, q = reachable_pose(P, rng)
        if singularity_margin(P, pose, q)[0] <= 0.01:
            continue
        mode = WorkingMode(-1, -1, assembly_of(P, pose, q))
        drho = rng.normal(size=2)
        drho *= 1e-4 / np.linalg.norm(drho)
        moved = alpha_fk(P, JointVector(q.rho1 + drho[0], q.rho2 + drho[1]), mode)
        actual = np.array([moved.x - pose.x, moved.y - pose.y])
        pred = alpha_jacobians(P, pose, q).pose_rate(drho)
        assert np.linalg.norm(actual - pred) <= 0.01 * np.linalg.norm(pred)
        checked += 1


def test_serial_singularity_is_reach_limit():
    """At zero serial margin the inverse-kinematics radicand vanishes."""
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = rng.uniform(500, 800)
        for sign in (1, -1):
            pose = PlanarPose(x, P.e1y + sign * P.L)
            q = alpha_ik(P, pose, check_stroke=False)
            assert singularity_margin(P, pose, q)[1] == 0.0
            assert P.L**2 - (pose.y - P.e1y) ** 2 == 0.0
