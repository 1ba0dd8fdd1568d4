"""Kinematics of the planar P-Pi-R-P stage.

The two closure constraints are

    f1 = (x - e1x - rho1 - L3/2)**2 + (y - e1y)**2 - L**2
    f2 = (L2 - x - L3/2 - e2x - rho2)**2 + (y - e2y)**2 - L**2

Solving them for the joints gives the inverse kinematics

    rho1 = x - e1x - L3/2 + b1 * sqrt(L**2 - (y - e1y)**2)
    rho2 = L2 - x - L3/2 - e2x + b2 * sqrt(L**2 - (y - e2y)**2)

with branch signs ``b1, b2`` taken from :class:`WorkingMode` (-1 by default).
Note the radicand is ``L**2`` and the right arm uses ``e2y``; a ``2 L**2``
radicand or a shared ``e1y`` would not be consistent with the constraints.

Jacobians are taken of the constraints divided by two, so ``A @ dX + B @ drho = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import DesignParams, JointVector, PlanarPose, WorkingMode, validate_joints
from .errors import ConsistencyError, NoAssemblyError, UnreachableError

__all__ = [
    "AlphaJacobians",
    "alpha_constraints",
    "alpha_ik",
    "alpha_fk",
    "alpha_jacobians",
    "singularity_margin",
    "assembly_of",
    "ik_arrays",
    "det_a_arrays",
    "CONSISTENCY_TOL",
]

DEFAULT_MODE = WorkingMode()
CONSISTENCY_TOL = 1e-6  # mm**2


def _arm_vectors(p: DesignParams, x, y, rho1, rho2):
    u1x = x - p.e1x - rho1 - p.L3 / 2
    u2x = p.L2 - x - p.L3 / 2 - p.e2x - rho2
    return u1x, y - p.e1y, u2x, y - p.e2y


def alpha_constraints(p: DesignParams, pose: PlanarPose, q: JointVector) -> tuple[float, float]:
    u1x, u1y, u2x, u2y = _arm_vectors(p, pose.x, pose.y, q.rho1, q.rho2)
    L2sq = p.L * p.L
    return u1x * u1x + u1y * u1y - L2sq, u2x * u2x + u2y * u2y - L2sq


def _half_chord(L: float, dy: float) -> float:
    # (L - |dy|)(L + |dy|) keeps precision near the reach limit
    a = abs(dy)
    return math.sqrt((L - a) * (L + a))


def alpha_ik(
    p: DesignParams,
    pose: PlanarPose,
    mode: WorkingMode = DEFAULT_MODE,
    check_stroke: bool = True,
) -> JointVector:
    """Actuator positions placing V at ``pose``.

    Raises :class:`UnreachableError` when an arm cannot span the vertical
    offset and :class:`StrokeError` when a result leaves its stroke.
    """
    dy1 = pose.y - p.e1y
    dy2 = pose.y - p.e2y
    if abs(dy1) > p.L:
        raise UnreachableError("unreachable: |y-e1y| exceeds L")
    if abs(dy2) > p.L:
        raise UnreachableError("unreachable: |y-e2y| exceeds L")
    rho1 = pose.x - p.e1x - p.L3 / 2 + mode.branch1 * _half_chord(p.L, dy1)
    rho2 = p.L2 - pose.x - p.L3 / 2 - p.e2x + mode.branch2 * _half_chord(p.L, dy2)
    q = JointVector(rho1, rho2)
    if check_stroke:
        return validate_joints(p, q)
    return q


def _circle_centers(p: DesignParams, q: JointVector):
    c1 = (p.e1x + q.rho1 + p.L3 / 2, p.e1y)
    c2 = (p.L2 - q.rho2 - p.e2x - p.L3 / 2, p.e2y)
    return c1, c2


def alpha_fk(p: DesignParams, q: JointVector, mode: WorkingMode = DEFAULT_MODE) -> PlanarPose:
    """Position of V for given actuators.

    V lies on two circles of radius ``L``; ``mode.assembly`` selects the
    intersection on the left (+1) or right (-1) of the line from the left
    circle center to the right one. Tangent circles give a single solution.
    """
    (c1x, c1y), (c2x, c2y) = _circle_centers(p, q)
    dx, dy = c2x - c1x, c2y - c1y
    d = math.hypot(dx, dy)
    if d == 0.0:
        raise NoAssemblyError("no assembly: circle centers coincide")
    half = d / 2
    h2 = (p.L - half) * (p.L + half)
    if h2 < 0.0:
        if h2 < -1e-12 * p.L * p.L:
            raise NoAssemblyError(
                f"no assembly: center distance {d:.6f} exceeds 2L={2 * p.L:.6f}"
            )
        h2 = 0.0
    h = math.sqrt(h2)
    mx, my = c1x + dx / 2, c1y + dy / 2
    s = mode.assembly * h / d
    return PlanarPose(mx - s * dy, my + s * dx)


def assembly_of(p: DesignParams, pose: PlanarPose, q: JointVector) -> int:
    """Assembly sign (+1/-1) of ``pose`` relative to the circle centers of ``q``."""
    (c1x, c1y), (c2x, c2y) = _circle_centers(p, q)
    cross = (c2x - c1x) * (pose.y - c1y) - (c2y - c1y) * (pose.x - c1x)
    return 1 if cross >= 0 else -1


@dataclass(frozen=True)
class AlphaJacobians:
    A: np.ndarray
    B: np.ndarray

    @property
    def detA(self) -> float:
        return float(self.A[0, 0] * self.A[1, 1] - self.A[0, 1] * self.A[1, 0])

    @property
    def detB(self) -> float:
        return float(self.B[0, 0] * self.B[1, 1])

    def pose_rate(self, drho) -> np.ndarray:
        """First-order pose displacement ``-A^-1 B drho``."""
        return -np.linalg.solve(self.A, self.B @ np.asarray(drho, dtype=float))


def alpha_jacobians(
    p: DesignParams, pose: PlanarPose, q: JointVector, tol: float = CONSISTENCY_TOL
) -> AlphaJacobians:
    f1, f2 = alpha_constraints(p, pose, q)
    if abs(f1) > tol or abs(f2) > tol:
        raise ConsistencyError(
            f"pose and joints inconsistent: residuals ({f1:.3e}, {f2:.3e}) mm^2"
        )
    u1x, u1y, u2x, u2y = _arm_vectors(p, pose.x, pose.y, q.rho1, q.rho2)
    A = np.array([[u1x, u1y], [-u2x, u2y]], dtype=float)
    B = np.array([[-u1x, 0.0], [0.0, -u2x]], dtype=float)
    return AlphaJacobians(A, B)


def singularity_margin(
    p: DesignParams, pose: PlanarPose, q: JointVector, tol: float = CONSISTENCY_TOL
) -> tuple[float, float]:
    """``(|det A| / L**2, min |B_ii| / L)``; zero means singular."""
    J = alpha_jacobians(p, pose, q, tol)
    return abs(J.detA) / (p.L * p.L), min(abs(J.B[0, 0]), abs(J.B[1, 1])) / p.L


# Array versions used by the workspace and placement searches.


def ik_arrays(p: DesignParams, x, y, mode: WorkingMode = DEFAULT_MODE):
    """Vectorized inverse kinematics without stroke checks.

    Returns ``(rho1, rho2, reach1, reach2)`` where ``reach_k = L - |y - e_ky|``;
    joints are NaN wherever the matching reach is negative.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a1 = np.abs(y - p.e1y)
    a2 = np.abs(y - p.e2y)
    reach1 = p.L - a1
    reach2 = p.L - a2
    with np.errstate(invalid="ignore"):
        s1 = np.sqrt(reach1 * (p.L + a1))
        s2 = np.sqrt(reach2 * (p.L + a2))
    rho1 = x - p.e1x - p.L3 / 2 + mode.branch1 * s1
    rho2 = p.L2 - x - p.L3 / 2 - p.e2x + mode.branch2 * s2
    return rho1, rho2, reach1, reach2


def det_a_arrays(p: DesignParams, x, y, mode: WorkingMode = DEFAULT_MODE):
    """``det A`` along the inverse-kinematics branch of ``mode`` (NaN if unreachable)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rho1, rho2, _, _ = ik_arrays(p, x, y, mode)
    u1x, u1y, u2x, u2y = _arm_vectors(p, x, y, rho1, rho2)
    return u1x * u2y + u1y * u2x
