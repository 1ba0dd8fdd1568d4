"""Minimal SVG 1.1 writer for workspace figures.

One user unit is one millimetre. The y axis is flipped by writing ``-y`` so the
drawing reads with +y up; path data therefore carries negated ordinates.
"""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

__all__ = ["path_data", "SvgFigure"]


def path_data(points, closed: bool = True) -> str:
    pts = np.asarray(points, dtype=float)
    if len(pts) == 0:
        return ""
    parts = [f"M {pts[0, 0]:.4f},{-pts[0, 1]:.4f}"]
    parts += [f"L {x:.4f},{-y:.4f}" for x, y in pts[1:]]
    if closed:
        parts.append("Z")
    return " ".join(parts)


class SvgFigure:
    def __init__(self, bounds, pad: float = 20.0):
        self.bounds = bounds
        self.pad = pad
        self._items: list[str] = []

    def path(self, points, closed=True, stroke="black", width=1.0, dash=None, fill="none", cls=None):
        attrs = {
            "d": path_data(points, closed),
            "fill": fill,
            "stroke": stroke,
            "stroke-width": f"{width:g}",
        }
        if dash:
            attrs["stroke-dasharray"] = dash
        if cls:
            attrs["class"] = cls
        self._items.append("<path " + " ".join(f"{k}={quoteattr(v)}" for k, v in attrs.items()) + "/>")

    def cells(self, centers, size: float, fill="#4a9", cls="placement"):
        half = size / 2
        for x, y in np.asarray(centers, dtype=float).reshape(-1, 2):
            self._items.append(
                f'<rect class="{cls}" x="{x - half:.4f}" y="{-y - half:.4f}" '
                f'width="{size:.4f}" height="{size:.4f}" fill="{fill}" stroke="none"/>'
            )

    def text(self, x, y, s, size=12.0):
        esc = s.replace("&", "&amp;").replace("<", "&lt;")
        self._items.append(f'<text x="{x:.4f}" y="{-y:.4f}" font-size="{size:g}">{esc}</text>')

    def render(self) -> str:
        xmin, ymin, xmax, ymax = self.bounds
        p = self.pad
        w, h = xmax - xmin + 2 * p, ymax - ymin + 2 * p
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{w:.4f}mm" height="{h:.4f}mm" '
            f'viewBox="{xmin - p:.4f} {-ymax - p:.4f} {w:.4f} {h:.4f}">\n'
        )
        return head + "\n".join(self._items) + "\n</svg>\n"
