"""Inclined insertion actuator and its composition with the planar stage.

The insertion actuator moves P along the line through ``(e3y, e3z)`` with
direction ``(sin theta, cos theta)`` in the ``y'``/``z'`` frame. That frame is
carried by V: world ``y`` is ``y_V + e4y + y'`` and world ``z`` is
``e4z + z'``, while world ``x`` is the abscissa of V.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .alpha import DEFAULT_MODE, alpha_fk, alpha_ik
from .design import DesignParams, JointVector, PlanarPose, SpatialPose, WorkingMode
from .errors import NegativeDirectionError, OffAxisError, StrokeError, UnreachableError

__all__ = ["BetaPose", "beta_fk", "beta_ik", "gamma_fk", "gamma_ik", "insertion_direction"]

AXIS_TOL = 1e-6  # mm


@dataclass(frozen=True)
class BetaPose:
    y_prime: float
    z_prime: float


def insertion_direction(p: DesignParams) -> tuple[float, float, float]:
    """World-frame unit vector of increasing ``rho3``."""
    return (0.0, math.sin(p.theta), math.cos(p.theta))


def beta_fk(p: DesignParams, rho3: float) -> BetaPose:
    return BetaPose(p.e3y + rho3 * math.sin(p.theta), p.e3z + rho3 * math.cos(p.theta))


def beta_ik(p: DesignParams, pose: BetaPose, tol: float = AXIS_TOL) -> float:
    """Stroke of the insertion actuator reaching ``pose``.

    The distance formula alone accepts any point, so the pose is first checked
    to lie on the forward half of the actuator line.
    """
    dz = pose.z_prime - p.e3z
    dy = pose.y_prime - p.e3y
    s, c = math.sin(p.theta), math.cos(p.theta)
    off = dz * s - dy * c
    if abs(off) > tol:
        raise OffAxisError(f"off-axis: pose is {off:.6g} mm from the insertion line")
    if dz * c + dy * s < -tol:
        raise NegativeDirectionError("negative-direction: pose lies behind the actuator origin")
    return math.hypot(dz, dy)


def gamma_fk(p: DesignParams, q: JointVector, mode: WorkingMode = DEFAULT_MODE) -> SpatialPose:
    if q.rho3 is None:
        raise ValueError("gamma_fk needs rho3")
    lo, hi = p.stroke(3)
    if q.rho3 < lo:
        raise StrokeError("rho3", "min", q.rho3, lo)
    if q.rho3 > hi:
        raise StrokeError("rho3", "max", q.rho3, hi)
    v = alpha_fk(p, q, mode)
    b = beta_fk(p, q.rho3)
    return SpatialPose(v.x, v.y + p.e4y + b.y_prime, p.e4z + b.z_prime)


def gamma_ik(p: DesignParams, target: SpatialPose, mode: WorkingMode = DEFAULT_MODE) -> JointVector:
    """Joints reaching ``target``: ``rho3`` from depth, then the planar stage.

    Errors are re-raised with the failing stage ("beta" or "alpha") named.
    """
    rho3 = (target.z - p.e4z - p.e3z) / math.cos(p.theta)
    if rho3 < 0:
        raise NegativeDirectionError(
            f"beta: negative-direction, depth {target.z:.6f} needs rho3={rho3:.6f} < 0"
        )
    lo, hi = p.stroke(3)
    if rho3 < lo:
        raise StrokeError("rho3", "min", rho3, lo, stage="beta")
    if rho3 > hi:
        raise StrokeError("rho3", "max", rho3, hi, stage="beta")
    y_v = target.y - p.e4y - p.e3y - rho3 * math.sin(p.theta)
    try:
        q = alpha_ik(p, PlanarPose(target.x, y_v), mode)
    except StrokeError as exc:
        raise StrokeError(exc.actuator, exc.bound, exc.value, exc.limit, stage="alpha") from exc
    except UnreachableError as exc:
        raise type(exc)(f"alpha: {exc}") from exc
    return JointVector(q.rho1, q.rho2, rho3, validated=True)
