"""Placement of a regular (square-like) workspace inside the reachable region.

The square of half-side ``l_b`` centred at ``(x_c, y_c)`` is approximated by
the Lame curve ``|x - x_c|**n + |y - y_c|**n = l_b**n`` with even ``n``; the
square side is ``2 * l_b``. A placement is accepted when every boundary sample
of the curve and its center are reachable. This is a sampling semi-decision:
the sample count bounds how far the curve can stray between samples.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import ndimage, optimize

from .alpha import DEFAULT_MODE, det_a_arrays
from .design import DesignParams, WorkingMode
from .workspace import boundary, margins

__all__ = [
    "LamePlacement",
    "lame_boundary",
    "placement_scores",
    "placement_feasible",
    "PlacementComponent",
    "PlacementMap",
    "placement_region",
    "InscribedResult",
    "max_inscribed",
    "placement_csv",
]

DEFAULT_SAMPLES = 1024
DEFAULT_GRID = 128
_CHUNK = 1 << 21  # curve samples evaluated per numpy pass


def _check_exponent(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 2 or int(n) % 2:
        raise ValueError(f"Lame exponent must be an even integer >= 2, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class LamePlacement:
    x_c: float
    y_c: float
    l_b: float
    n: int = 12
    feasible: Optional[bool] = None
    certificate: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "n", _check_exponent(self.n))
        if not self.l_b >= 0:
            raise ValueError(f"l_b must be >= 0, got {self.l_b}")


def _unit_lame(n: int, samples: int) -> np.ndarray:
    t = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    c, s = np.cos(t), np.sin(t)
    e = 2.0 / n
    return np.column_stack([np.sign(c) * np.abs(c) ** e, np.sign(s) * np.abs(s) ** e])


def lame_boundary(x_c: float, y_c: float, l_b: float, n: int, samples: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Points on the Lame curve, evenly spaced in the angular parameter.

    ``x = x_c + l_b * sgn(cos t) |cos t|**(2/n)`` and likewise for ``y`` with
    ``sin t``, so ``n = 2`` gives a circle and larger ``n`` squares it off.
    """
    if samples < 16:
        raise ValueError("samples must be >= 16")
    if l_b < 0:
        raise ValueError("l_b must be >= 0")
    return np.array([x_c, y_c]) + l_b * _unit_lame(_check_exponent(n), samples)


def placement_scores(
    p: DesignParams,
    centers: np.ndarray,
    l_b: float,
    n: int,
    samples: int = DEFAULT_SAMPLES,
    mode: WorkingMode = DEFAULT_MODE,
    want_max: bool = False,
):
    """Worst reachability margin of each placement.

    Returns ``(min_margin, center_margin)`` arrays, plus the best sample
    margin when ``want_max`` is set. ``min_margin`` covers the curve samples
    only.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    unit = l_b * _unit_lame(_check_exponent(n), samples)
    k = len(centers)
    lo = np.empty(k)
    hi = np.empty(k)
    step = max(1, _CHUNK // samples)
    for i in range(0, k, step):
        c = centers[i : i + step]
        x = c[:, :1] + unit[:, 0]
        y = c[:, 1:] + unit[:, 1]
        m = margins(p, x, y, mode)
        lo[i : i + step] = m.min(axis=1)
        if want_max:
            hi[i : i + step] = m.max(axis=1)
    cm = margins(p, centers[:, 0], centers[:, 1], mode)
    if want_max:
        return lo, cm, hi
    return lo, cm


def _certificate(lo, cm):
    return np.maximum(0.0, -np.minimum(lo, cm))


def placement_feasible(
    p: DesignParams,
    candidate: LamePlacement,
    samples: int = DEFAULT_SAMPLES,
    mode: WorkingMode = DEFAULT_MODE,
) -> LamePlacement:
    """Fill ``feasible`` and ``certificate`` (largest sampled violation, mm)."""
    if samples < 256:
        raise ValueError("samples must be >= 256")
    lo, cm = placement_scores(p, [(candidate.x_c, candidate.y_c)], candidate.l_b, candidate.n, samples, mode)
    ok = bool(lo[0] >= 0 and cm[0] >= 0)
    return replace(candidate, feasible=ok, certificate=float(_certificate(lo, cm)[0]))


@dataclass(frozen=True)
class PlacementComponent:
    label: int
    cells: int
    inside_workspace: bool
    single_aspect: Optional[bool]
    witness: tuple


@dataclass(frozen=True)
class PlacementMap:
    """Grid of candidate centers for one ``(l_b, n)``.

    ``labels`` numbers the 4-connected components: positive labels are
    placements inside the workspace (the feasible set), negative labels are
    placements lying wholly outside it. Zero marks centers whose curve
    crosses the workspace boundary.
    """

    l_b: float
    n: int
    xs: np.ndarray
    ys: np.ndarray
    feasible: np.ndarray
    score: np.ndarray
    labels: np.ndarray
    components: tuple = field(default=())

    @property
    def accepted(self) -> tuple:
        return tuple(c for c in self.components if c.inside_workspace)

    @property
    def empty(self) -> bool:
        return not self.feasible.any()

    def feasible_centers(self) -> np.ndarray:
        iy, ix = np.nonzero(self.feasible)
        return np.column_stack([self.xs[ix], self.ys[iy]])


def _grid_axes(bounds, grid: int):
    xmin, ymin, xmax, ymax = bounds
    dx = (xmax - xmin) / grid
    dy = (ymax - ymin) / grid
    return xmin + dx * (np.arange(grid) + 0.5), ymin + dy * (np.arange(grid) + 0.5)


def _single_aspect(p, x_c, y_c, l_b, n, samples, mode) -> bool:
    pts = lame_boundary(x_c, y_c, l_b, n, samples)
    d = det_a_arrays(p, np.append(pts[:, 0], x_c), np.append(pts[:, 1], y_c), mode)
    return bool(np.all(d > 0) or np.all(d < 0))


def placement_region(
    p: DesignParams,
    l_b: float,
    n: int = 12,
    grid: int = DEFAULT_GRID,
    samples: int = DEFAULT_SAMPLES,
    mode: WorkingMode = DEFAULT_MODE,
    region=None,
) -> PlacementMap:
    """Evaluate every center of a ``grid x grid`` raster over the workspace box."""
    if grid < 32:
        raise ValueError("grid must be >= 32")
    if not l_b > 0:
        raise ValueError("l_b must be > 0")
    n = _check_exponent(n)
    if region is None:
        region = boundary(p, mode=mode)
    xs, ys = _grid_axes(region.bounds, grid)
    X, Y = np.meshgrid(xs, ys)
    centers = np.column_stack([X.ravel(), Y.ravel()])
    lo, cm, hi = placement_scores(p, centers, l_b, n, samples, mode, want_max=True)
    feasible = ((lo >= 0) & (cm >= 0)).reshape(X.shape)
    outside = ((hi < 0) & (cm < 0)).reshape(X.shape)
    score = np.minimum(lo, cm).reshape(X.shape)

    inside_lab, n_in = ndimage.label(feasible)
    outside_lab, n_out = ndimage.label(outside)
    labels = inside_lab - outside_lab
    comps = []
    for k in range(1, n_in + 1):
        cells = inside_lab == k
        iy, ix = np.unravel_index(np.argmax(np.where(cells, score, -np.inf)), score.shape)
        w = (float(xs[ix]), float(ys[iy]))
        comps.append(PlacementComponent(k, int(cells.sum()), True, _single_aspect(p, *w, l_b, n, samples, mode), w))
    for k in range(1, n_out + 1):
        cells = outside_lab == k
        iy, ix = np.argwhere(cells)[0]
        comps.append(PlacementComponent(-k, int(cells.sum()), False, None, (float(xs[ix]), float(ys[iy]))))
    return PlacementMap(l_b, n, xs, ys, feasible, score, labels, tuple(comps))


def placement_csv(pm: PlacementMap) -> str:
    """``x_c,y_c,feasible,component`` rows, one per grid cell."""
    buf = io.StringIO()
    buf.write("x_c,y_c,feasible,component\n")
    for iy, y in enumerate(pm.ys):
        for ix, x in enumerate(pm.xs):
            buf.write(f"{x:.6f},{y:.6f},{int(pm.feasible[iy, ix])},{int(pm.labels[iy, ix])}\n")
    return buf.getvalue()


@dataclass(frozen=True)
class InscribedResult:
    x_c: float
    y_c: float
    l_b_max: float
    n: int
    placement: LamePlacement
    history: tuple  # (l_b, feasible) per bisection step

    @property
    def side(self) -> float:
        return 2 * self.l_b_max


def _local_ascent(score_fn, start, scale: float, tol: float):
    res = optimize.minimize(
        lambda c: -score_fn(c),
        np.asarray(start, dtype=float),
        method="Nelder-Mead",
        options={
            "initial_simplex": np.array(start) + np.array([[0, 0], [scale, 0], [0, scale]]),
            "xatol": tol,
            "fatol": 1e-9,
            "maxiter": 400,
        },
    )
    return res.x, -res.fun


def max_inscribed(
    p: DesignParams,
    n: int = 12,
    tolerance: float = 0.5,
    grid: int = 64,
    samples: int = DEFAULT_SAMPLES,
    mode: WorkingMode = DEFAULT_MODE,
    starts: int = 4,
) -> InscribedResult:
    """Largest half-side ``l_b`` for which some placement fits, by bisection.

    Each bisection step asks whether any center works: first on a raster of
    centers, then by a local Nelder-Mead ascent of the worst sampled margin
    from the ``starts`` best raster cells, which recovers optima lying
    between raster points. The returned placement is re-certified with four
    times the sample count and shrunk until it passes.
    """
    n = _check_exponent(n)
    region = boundary(p, mode=mode)
    xmin, ymin, xmax, ymax = region.bounds
    xs, ys = _grid_axes(region.bounds, grid)
    # rows from the top down: ties between mirror-image optima go to +y
    X, Y = np.meshgrid(xs, ys[::-1])
    centers = np.column_stack([X.ravel(), Y.ravel()])
    centers = centers[margins(p, centers[:, 0], centers[:, 1], mode) >= 0]
    if len(centers) == 0:
        v = region.boundary.vertices
        centers = v.mean(axis=0, keepdims=True)
    cell = max((xmax - xmin) / grid, (ymax - ymin) / grid)

    def score(c, l_b):
        lo, cm = placement_scores(p, [c], l_b, n, samples, mode)
        return float(min(lo[0], cm[0]))

    def find_center(l_b):
        nonlocal centers
        lo, cm = placement_scores(p, centers, l_b, n, samples, mode)
        s = np.minimum(lo, cm)
        best = int(np.argmax(s))
        if s[best] >= 0:
            centers = centers[s >= 0]  # nesting in l_b: larger squares only fit here
            return tuple(centers[int(np.argmax(s[s >= 0]))])
        for i in np.argsort(-s, kind="stable")[:starts]:
            c, val = _local_ascent(lambda c: score(c, l_b), centers[i], cell, tolerance / 20)
            if val >= 0:
                return tuple(c)
        return None

    lo_b = 0.0
    witness = tuple(centers[int(np.argmax(margins(p, centers[:, 0], centers[:, 1], mode)))])
    hi_b = 0.5 * min(xmax - xmin, ymax - ymin)
    history = []
    while hi_b - lo_b > tolerance:
        mid = 0.5 * (lo_b + hi_b)
        c = find_center(mid)
        history.append((mid, c is not None))
        if c is None:
            hi_b = mid
        else:
            lo_b, witness = mid, c

    final = placement_feasible(p, LamePlacement(witness[0], witness[1], lo_b, n), 4 * samples, mode)
    shrink = tolerance / 64
    while not final.feasible and final.l_b > 0:
        final = placement_feasible(p, replace(final, l_b=max(0.0, final.l_b - shrink)), 4 * samples, mode)
    return InscribedResult(float(witness[0]), float(witness[1]), final.l_b, n, final, tuple(history))
