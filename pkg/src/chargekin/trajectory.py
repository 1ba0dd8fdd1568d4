"""Straight-line waypoint plans in joint space.

A plan is a list of Cartesian samples with their joints; nothing is said about
motion between waypoints.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .alpha import DEFAULT_MODE, singularity_margin
from .beta_gamma import gamma_ik, insertion_direction
from .design import DesignParams, JointVector, PlanarPose, SpatialPose, WorkingMode
from .errors import DepthExceedsStrokeError, SingularityError, StrokeError, UnreachableError

__all__ = ["Waypoint", "MotionPlan", "plan_line", "plan_insertion", "plan_csv"]

DEFAULT_MARGIN_FLOOR = 0.01


@dataclass(frozen=True)
class Waypoint:
    pose: SpatialPose
    joints: JointVector
    parallel_margin: float


@dataclass(frozen=True)
class MotionPlan:
    waypoints: tuple
    min_parallel_margin: float
    min_stroke_clearance: float
    step: float

    def __len__(self):
        return len(self.waypoints)

    def joints_array(self) -> np.ndarray:
        return np.array([w.joints.as_tuple() for w in self.waypoints])

    def poses_array(self) -> np.ndarray:
        return np.array([(w.pose.x, w.pose.y, w.pose.z) for w in self.waypoints])


def _clearance(p: DesignParams, q: JointVector) -> float:
    return min(
        min(v - p.stroke(k)[0], p.stroke(k)[1] - v)
        for k, v in ((1, q.rho1), (2, q.rho2), (3, q.rho3))
    )


def _planar(p: DesignParams, target: SpatialPose, q: JointVector) -> PlanarPose:
    y_v = target.y - p.e4y - p.e3y - q.rho3 * math.sin(p.theta)
    return PlanarPose(target.x, y_v)


def plan_line(
    p: DesignParams,
    start: SpatialPose,
    end: SpatialPose,
    step: float = 1.0,
    margin_floor: float = DEFAULT_MARGIN_FLOOR,
    mode: WorkingMode = DEFAULT_MODE,
) -> MotionPlan:
    """Sample the segment ``start -> end`` no more than ``step`` mm apart.

    Fails with the first unreachable or out-of-stroke waypoint (reporting its
    arc-length fraction), or with :class:`SingularityError` at the waypoint of
    smallest parallel margin when that margin is under ``margin_floor``.
    """
    if not step > 0:
        raise ValueError("step must be > 0")
    a = np.array([start.x, start.y, start.z], dtype=float)
    b = np.array([end.x, end.y, end.z], dtype=float)
    length = float(np.linalg.norm(b - a))
    count = max(1, math.ceil(length / step)) if length > 0 else 0
    waypoints = []
    for i in range(count + 1):
        frac = i / count if count else 0.0
        xyz = b if i == count else a + frac * (b - a)
        pose = SpatialPose(*map(float, xyz))
        try:
            q = gamma_ik(p, pose, mode)
        except StrokeError as exc:
            raise type(exc)(exc.actuator, exc.bound, exc.value, exc.limit,
                            stage=f"waypoint {i} (fraction {frac:.4f}), {exc.stage}") from exc
        except UnreachableError as exc:
            raise type(exc)(f"unreachable waypoint {i} at fraction {frac:.4f}: {exc}") from exc
        par, _ = singularity_margin(p, _planar(p, pose, q), q)
        waypoints.append(Waypoint(pose, q, par))
    worst = min(waypoints, key=lambda w: w.parallel_margin)
    if worst.parallel_margin < margin_floor:
        raise SingularityError(
            f"singularity: parallel margin {worst.parallel_margin:.3e} < {margin_floor} "
            f"at ({worst.pose.x:.3f}, {worst.pose.y:.3f}, {worst.pose.z:.3f})"
        )
    return MotionPlan(
        tuple(waypoints),
        worst.parallel_margin,
        min(_clearance(p, w.joints) for w in waypoints),
        step,
    )


def plan_insertion(
    p: DesignParams,
    socket: SpatialPose,
    depth: float,
    step: float = 1.0,
    margin_floor: float = DEFAULT_MARGIN_FLOOR,
    mode: WorkingMode = DEFAULT_MODE,
) -> MotionPlan:
    """Axial insertion: start ``depth`` mm back along the insertion axis, end at ``socket``."""
    if not depth > 0:
        raise ValueError("depth must be > 0")
    stroke = p.rho3_max - p.rho3_min
    if depth > stroke:
        raise DepthExceedsStrokeError(depth, stroke)
    _, uy, uz = insertion_direction(p)
    start = SpatialPose(socket.x, socket.y - depth * uy, socket.z - depth * uz)
    return plan_line(p, start, socket, step, margin_floor, mode)


def plan_csv(plan: MotionPlan) -> str:
    buf = io.StringIO()
    buf.write("index,x,y,z,rho1,rho2,rho3,parallel_margin\n")
    for i, w in enumerate(plan.waypoints):
        q = w.joints
        buf.write(
            f"{i},{w.pose.x:.9f},{w.pose.y:.9f},{w.pose.z:.9f},"
            f"{q.rho1:.9f},{q.rho2:.9f},{q.rho3:.9f},{w.parallel_margin:.9f}\n"
        )
    return buf.getvalue()
