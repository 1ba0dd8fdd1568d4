"""Reachable region of V for the planar stage.

Ground truth for membership is inverse-kinematics feasibility: both arms reach
the point and both actuators stay inside their closed strokes. A closed-form
predicate built from the four boundary circles is kept alongside as a cross
check.

Each constraint has a signed residual in millimetres, positive inside:

========== =============================== ===========================
tag        residual                        boundary curve
========== =============================== ===========================
rho1_min   rho1 - rho1_min                 circle about (c1min, e1y)
rho1_max   rho1_max - rho1                 circle about (c1max, e1y)
rho2_min   rho2 - rho2_min                 circle about (c2max, e2y)
rho2_max   rho2_max - rho2                 circle about (c2min, e2y)
reach1     L - |y - e1y|                   horizontal line
reach2     L - |y - e2y|                   horizontal line
========== =============================== ===========================

Stroke residuals are horizontal distances to the matching circle, since
``rho1`` and ``rho2`` have unit slope in ``x``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .alpha import DEFAULT_MODE, det_a_arrays, ik_arrays
from .design import DesignParams, PlanarPose, WorkingMode
from .errors import DegenerateRegionError

__all__ = [
    "TAGS",
    "StrokeAnchors",
    "stroke_anchors",
    "constraint_residuals",
    "margins",
    "membership",
    "analytic_membership",
    "BoundaryLoop",
    "WorkspaceRegion",
    "boundary",
    "singularity_locus",
    "boundary_csv",
]

TAGS = ("rho1_min", "rho1_max", "rho2_min", "rho2_max", "reach1", "reach2")
BAND = 1e-6  # mm


@dataclass(frozen=True)
class StrokeAnchors:
    """Rail abscissae of the arm base joints at the ends of their strokes.

    ``e5x`` is joint A with the left actuator fully extended, ``e6x`` joint E
    with the right actuator fully extended and ``e7x`` joint E fully retracted.
    """

    e5x: float
    e6x: float
    e7x: float


def stroke_anchors(p: DesignParams) -> StrokeAnchors:
    return StrokeAnchors(
        e5x=p.e1x + p.rho1_max,
        e6x=p.L2 - p.e2x - p.rho2_max,
        e7x=p.L2 - p.e2x - p.rho2_min,
    )


def constraint_residuals(p: DesignParams, x, y, mode: WorkingMode = DEFAULT_MODE) -> np.ndarray:
    """Residuals stacked on a trailing axis in :data:`TAGS` order.

    Stroke residuals are NaN where the corresponding arm cannot reach.
    """
    rho1, rho2, reach1, reach2 = ik_arrays(p, x, y, mode)
    return np.stack(
        [rho1 - p.rho1_min, p.rho1_max - rho1, rho2 - p.rho2_min, p.rho2_max - rho2, reach1, reach2],
        axis=-1,
    )


def margins(p: DesignParams, x, y, mode: WorkingMode = DEFAULT_MODE) -> np.ndarray:
    """Smallest residual per point; ``>= 0`` exactly on the reachable set."""
    r = constraint_residuals(p, x, y, mode)
    return np.fmin.reduce(r, axis=-1)


def membership(
    p: DesignParams,
    pose: PlanarPose,
    mode: WorkingMode = DEFAULT_MODE,
    tol: float = 0.0,
    check: bool = True,
) -> tuple[bool, float]:
    """``(inside, margin)`` for a single point.

    With ``check`` the closed-form circle predicate is evaluated as well and an
    ``AssertionError`` is raised if it disagrees farther than :data:`BAND`
    from the boundary.
    """
    m = float(margins(p, pose.x, pose.y, mode))
    inside = m >= -tol
    if check and abs(m) > BAND:
        analytic = bool(analytic_membership(p, pose.x, pose.y, mode))
        assert analytic == (m >= 0), (
            f"closed-form workspace test disagrees with IK feasibility at {pose}"
        )
    return inside, m


def _ge_signed_root(d, dy, L, sign):
    """``d >= sign * sqrt(L**2 - dy**2)`` assuming ``|dy| <= L``, with no square root."""
    on_circle_out = d * d + dy * dy >= L * L
    if sign > 0:
        return (d >= 0) & on_circle_out
    return (d >= 0) | ~on_circle_out


def analytic_membership(p: DesignParams, x, y, mode: WorkingMode = DEFAULT_MODE) -> np.ndarray:
    """Closed-form reachability from the four boundary circles and the reach strip.

    For the accessible mode the circle tests read

    * ``(x - L3/2 - e1x - rho1_min)**2 + (y - e1y)**2 >= L**2`` and ``x`` right of its center,
    * ``(x - L3/2 - e5x)**2 + (y - e1y)**2 <= L**2`` or ``x`` left of its center,
    * ``(x + L3/2 - e7x)**2 + (y - e2y)**2 >= L**2`` and ``x`` left of its center,
    * ``(x + L3/2 - e6x)**2 + (y - e2y)**2 <= L**2`` or ``x`` right of its center,

    and the fifth condition is ``|y - e_ky| <= L`` for both arms. The
    half-plane terms matter whenever a stroke is longer than the chord
    ``2 sqrt(L**2 - dy**2)``; without them only a crescent-shaped subset of the
    workspace is accepted.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = stroke_anchors(p)
    L = p.L
    dy1 = y - p.e1y
    dy2 = y - p.e2y
    c1min = p.L3 / 2 + p.e1x + p.rho1_min
    c1max = p.L3 / 2 + a.e5x
    c2max = a.e7x - p.L3 / 2
    c2min = a.e6x - p.L3 / 2
    b1, b2 = mode.branch1, mode.branch2
    reach = (np.abs(dy1) <= L) & (np.abs(dy2) <= L)
    return (
        reach
        & _ge_signed_root(x - c1min, dy1, L, -b1)
        & _ge_signed_root(c1max - x, dy1, L, b1)
        & _ge_signed_root(c2max - x, dy2, L, -b2)
        & _ge_signed_root(x - c2min, dy2, L, b2)
    )


# -- boundary -------------------------------------------------------------------


@dataclass(frozen=True)
class _Arc:
    tag: str
    cx: float
    cy: float
    sign: int  # x = cx + sign * sqrt(L**2 - (y - cy)**2)

    def x_at(self, L: float, y):
        a = np.abs(np.asarray(y, dtype=float) - self.cy)
        return self.cx + self.sign * np.sqrt(np.maximum((L - a) * (L + a), 0.0))

    def phi(self, L: float, y: float) -> float:
        return math.asin(min(1.0, max(-1.0, (y - self.cy) / L)))


def _arcs(p: DesignParams, mode: WorkingMode):
    c1min = p.e1x + p.rho1_min + p.L3 / 2
    c1max = p.e1x + p.rho1_max + p.L3 / 2
    c2min = p.L2 - p.L3 / 2 - p.e2x - p.rho2_max
    c2max = p.L2 - p.L3 / 2 - p.e2x - p.rho2_min
    lower = (_Arc("rho1_min", c1min, p.e1y, -mode.branch1), _Arc("rho2_max", c2min, p.e2y, mode.branch2))
    upper = (_Arc("rho1_max", c1max, p.e1y, -mode.branch1), _Arc("rho2_min", c2max, p.e2y, mode.branch2))
    return lower, upper


def _arc_crossings(L: float, a: _Arc, b: _Arc) -> list[float]:
    """Ordinates where two arcs from different arms meet."""
    dx, dy = b.cx - a.cx, b.cy - a.cy
    d = math.hypot(dx, dy)
    if d == 0.0 or d > 2 * L:
        return []
    half = d / 2
    h = math.sqrt(max((L - half) * (L + half), 0.0))
    mx, my = a.cx + dx / 2, a.cy + dy / 2
    out = []
    for s in (1.0, -1.0):
        px, py = mx - s * h * dy / d, my + s * h * dx / d
        tol = 1e-9 * L
        if a.sign * (px - a.cx) >= -tol and b.sign * (px - b.cx) >= -tol:
            out.append(py)
    return out


@dataclass(frozen=True)
class BoundaryLoop:
    """Closed counter-clockwise polyline; the last vertex joins the first."""

    vertices: np.ndarray
    tags: tuple

    @property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


@dataclass(frozen=True)
class WorkspaceRegion:
    params: DesignParams
    mode: WorkingMode
    bounds: tuple  # (xmin, ymin, xmax, ymax)
    loops: tuple

    @property
    def boundary(self) -> BoundaryLoop:
        """Largest connected piece of the region."""
        return max(self.loops, key=lambda lp: lp.area)

    @property
    def area(self) -> float:
        return sum(lp.area for lp in self.loops)

    def contains(self, x, y) -> np.ndarray:
        return margins(self.params, x, y, self.mode) >= 0


def _sample_arc(L: float, arc: _Arc, ya: float, yb: float, n: int) -> np.ndarray:
    """``n + 1`` points from ``ya`` to ``yb`` evenly spaced in polar angle."""
    phis = np.linspace(arc.phi(L, ya), arc.phi(L, yb), n + 1)
    ys = arc.cy + L * np.sin(phis)
    ys[0], ys[-1] = ya, yb
    xs = arc.x_at(L, ys)
    return np.column_stack([xs, ys])


def boundary(
    p: DesignParams, samples_per_arc: int = 64, mode: WorkingMode = DEFAULT_MODE
) -> WorkspaceRegion:
    """Trace the region boundary arc by arc.

    Every horizontal slice of the region is a single interval bounded on the
    left by the larger of two arcs and on the right by the smaller of two
    others, so the region is swept in ``y`` between breakpoints where the
    active arcs can change: arc crossings, reach limits and circle centers.
    """
    if samples_per_arc < 8:
        raise ValueError("samples_per_arc must be >= 8")
    L = p.L
    lower, upper = _arcs(p, mode)
    y_lo = max(p.e1y, p.e2y) - L
    y_hi = min(p.e1y, p.e2y) + L
    if y_lo >= y_hi:
        raise DegenerateRegionError("degenerate region: arms cannot reach a common height")

    cuts = {y_lo, y_hi, p.e1y, p.e2y}
    for a in lower + upper:
        for b in lower + upper:
            if a.tag[3] == "1" and b.tag[3] == "2":
                cuts.update(_arc_crossings(L, a, b))
    ys = np.array(sorted(c for c in cuts if y_lo <= c <= y_hi))
    keep = np.concatenate([[True], np.diff(ys) > 1e-12 * L])
    ys = ys[keep]

    def width(y):
        lo = max(arc.x_at(L, y) for arc in lower)
        hi = min(arc.x_at(L, y) for arc in upper)
        return hi - lo

    pieces = []  # (ya, yb, lower arc, upper arc)
    for ya, yb in zip(ys[:-1], ys[1:]):
        ym = 0.5 * (ya + yb)
        lo_arc = max(lower, key=lambda arc: arc.x_at(L, ym))
        hi_arc = min(upper, key=lambda arc: arc.x_at(L, ym))
        if hi_arc.x_at(L, ym) - lo_arc.x_at(L, ym) > 0:
            pieces.append((ya, yb, lo_arc, hi_arc))
    if not pieces:
        raise DegenerateRegionError("degenerate region: no reachable point with in-stroke joints")

    components = [[pieces[0]]]
    for piece in pieces[1:]:
        prev = components[-1][-1]
        if piece[0] == prev[1] and width(piece[0]) > 1e-9:
            components[-1].append(piece)
        else:
            components.append([piece])

    loops = []
    for comp in components:
        pts, tags = [], []
        for ya, yb, _, hi_arc in comp:
            seg = _sample_arc(L, hi_arc, ya, yb, samples_per_arc)[:-1]
            pts.append(seg)
            tags += [hi_arc.tag] * len(seg)
        ya, yb, _, hi_arc = comp[-1]
        pts.append(_sample_arc(L, hi_arc, yb, yb, 1)[:1])
        tags.append(hi_arc.tag)
        for ya, yb, lo_arc, _ in reversed(comp):
            seg = _sample_arc(L, lo_arc, yb, ya, samples_per_arc)[:-1]
            pts.append(seg)
            tags += [lo_arc.tag] * len(seg)
        ya0, _, lo_arc, _ = comp[0]
        pts.append(_sample_arc(L, lo_arc, ya0, ya0, 1)[:1])
        tags.append(lo_arc.tag)
        verts = np.concatenate(pts)
        # drop repeated vertices where the two sides pinch together
        nxt = np.roll(verts, -1, axis=0)
        distinct = np.hypot(*(verts - nxt).T) > 1e-9
        verts = verts[distinct]
        tags = tuple(t for t, k in zip(tags, distinct) if k)
        loops.append(BoundaryLoop(verts, tags))

    allv = np.concatenate([lp.vertices for lp in loops])
    bounds = (float(allv[:, 0].min()), float(allv[:, 1].min()), float(allv[:, 0].max()), float(allv[:, 1].max()))
    return WorkspaceRegion(p, mode, bounds, tuple(loops))


def boundary_csv(region: WorkspaceRegion) -> str:
    """``loop,x,y,tag`` rows; loops are closed implicitly."""
    buf = io.StringIO()
    buf.write("loop,x,y,tag\n")
    for k, lp in enumerate(region.loops):
        for (x, y), tag in zip(lp.vertices, lp.tags):
            buf.write(f"{k},{x:.9f},{y:.9f},{tag}\n")
    return buf.getvalue()


# -- singularity locus ----------------------------------------------------------


def _refine_zero(p: DesignParams, mode: WorkingMode, pts: np.ndarray, iters: int = 30) -> np.ndarray:
    """Newton-project points onto ``det A = 0`` along the numerical gradient."""
    pts = pts.copy()
    h = 1e-4
    for _ in range(iters):
        x, y = pts[:, 0], pts[:, 1]
        f = det_a_arrays(p, x, y, mode)
        gx = (det_a_arrays(p, x + h, y, mode) - det_a_arrays(p, x - h, y, mode)) / (2 * h)
        gy = (det_a_arrays(p, x, y + h, mode) - det_a_arrays(p, x, y - h, mode)) / (2 * h)
        g2 = gx * gx + gy * gy
        with np.errstate(invalid="ignore", divide="ignore"):
            step = np.where(g2 > 0, f / g2, 0.0)
        step = np.nan_to_num(step)
        pts[:, 0] -= step * gx
        pts[:, 1] -= step * gy
        if np.all(np.abs(step * np.sqrt(g2)) < 1e-12):
            break
    return pts


def singularity_locus(
    p: DesignParams,
    grid: int = 128,
    mode: WorkingMode = DEFAULT_MODE,
    region: WorkspaceRegion | None = None,
) -> list[np.ndarray]:
    """Polylines of ``det A = 0`` inside the workspace.

    The zero contour is traced with marching squares over the region's bounding
    box, projected back onto the exact locus, and clipped to the reachable set.
    """
    from skimage.measure import find_contours

    if grid < 32:
        raise ValueError("grid must be >= 32")
    if region is None:
        region = boundary(p, mode=mode)
    xmin, ymin, xmax, ymax = region.bounds
    xs = np.linspace(xmin, xmax, grid)
    ys = np.linspace(ymin, ymax, grid)
    X, Y = np.meshgrid(xs, ys)
    inside = margins(p, X, Y, mode) >= 0
    if not inside.any():
        return []
    values = np.where(inside, det_a_arrays(p, X, Y, mode), 0.0)
    out = []
    for c in find_contours(values, 0.0, mask=inside):
        pts = np.column_stack([np.interp(c[:, 1], np.arange(grid), xs), np.interp(c[:, 0], np.arange(grid), ys)])
        pts = _refine_zero(p, mode, pts)
        pts = pts[margins(p, pts[:, 0], pts[:, 1], mode) >= 0]
        if len(pts):
            out.append(pts)
    return out
