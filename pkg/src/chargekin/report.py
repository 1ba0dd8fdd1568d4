"""Requirement check of a design against the charging-robot requirement list (a)-(k)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .design import DesignParams
from .errors import DegenerateRegionError
from .placement import max_inscribed

__all__ = ["Requirement", "RequirementRow", "StudyReport", "REQUIREMENTS", "check_spec"]


@dataclass(frozen=True)
class Requirement:
    letter: str
    title: str
    nominal: str


REQUIREMENTS = (
    Requirement("a", "insertion and withdrawal forces", "70 N, +/-10 N"),
    Requirement("b", "depth of insertion", "40 mm, +/-20 mm"),
    Requirement("c", "distance between plug and socket", "20 mm, +10 mm"),
    Requirement("d", "workspace", "200 x 200 x 20 mm^3"),
    Requirement("e", "degrees of freedom", "3"),
    Requirement("f", "location accuracy", "0.5 mm, +/-0.1 mm"),
    Requirement("g", "length of electric cables", "1500 mm, +500 mm"),
    Requirement("h", "weight of electric cables", "1.4 kg, +0.45 kg"),
    Requirement("i", "plug diameter", "65 mm, +/-5 mm"),
    Requirement("j", "total weight of the robot", "10 kg, +5 kg"),
    Requirement("k", "occupied space", "1500 x 200 mm^2"),
)

INSERTION_DEPTH = 40.0
INSERTION_TOL = 20.0
STANDOFF = 20.0
STANDOFF_TOL = 10.0
SQUARE_SIDE = 200.0
DOF = 3

_NOT_EVALUABLE = {
    "a": "force depends on the plug and actuator hardware, not on kinematics",
    "f": "accuracy is a property of the physical robot and its camera loop",
    "g": "cable routing is outside the kinematic model",
    "h": "cable mass is outside the kinematic model",
    "i": "plug geometry is outside the kinematic model",
    "j": "robot mass needs a CAD/BOM model",
    "k": "occupied space needs the full CAD envelope",
}


@dataclass(frozen=True)
class RequirementRow:
    letter: str
    title: str
    status: str  # "pass", "fail" or "not evaluable"
    measured: Optional[float] = None
    required: Optional[float] = None
    note: str = ""

    def line(self) -> str:
        s = f"({self.letter}) {self.title}: {self.status}"
        if self.measured is not None:
            s += f" measured={self.measured:.3f} required={self.required:.3f}"
        if self.note:
            s += f"  # {self.note}"
        return s


@dataclass
class StudyReport:
    design: DesignParams
    rows: list
    artifacts: list = field(default_factory=list)
    l_b_max: Optional[float] = None
    center: Optional[tuple] = None

    def row(self, letter: str) -> RequirementRow:
        return next(r for r in self.rows if r.letter == letter)

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.rows)

    def render(self) -> str:
        p = self.design
        head = [
            f"design: L={p.L:g} L2={p.L2:g} L3={p.L3:g} theta={p.theta:.6f} rad "
            f"strokes rho1=[{p.rho1_min:g},{p.rho1_max:g}] rho2=[{p.rho2_min:g},{p.rho2_max:g}] "
            f"rho3=[{p.rho3_min:g},{p.rho3_max:g}] mm",
        ]
        if self.l_b_max is not None:
            c = self.center
            where = f" at ({c[0]:.3f}, {c[1]:.3f})" if c else ""
            head.append(f"largest regular workspace: l_b={self.l_b_max:.3f} mm (side {2 * self.l_b_max:.3f} mm){where}")
        body = [r.line() for r in self.rows]
        tail = [f"artifact: {a}" for a in self.artifacts]
        return "\n".join(head + body + tail) + "\n"


def _verdict(measured: float, required: float) -> str:
    return "pass" if measured >= required else "fail"


def check_spec(p: DesignParams, n: int = 12, tolerance: float = 0.5, grid: int = 64) -> StudyReport:
    """Evaluate (b), (c), (d), (e); the rest are reported as not evaluable.

    * (b) insertion stroke must cover the deepest insertion, 40 + 20 mm.
    * (c) insertion stroke must also bridge the largest standoff before the
      nominal insertion, 20 + 10 + 40 mm.
    * (d) the largest inscribed square (Lame exponent ``n``) must have
      side ``2 * l_b >= 200`` mm.
    * (e) the architecture has three actuated joints.
    """
    stroke = p.rho3_max - p.rho3_min
    rows = {}
    need_b = INSERTION_DEPTH + INSERTION_TOL
    rows["b"] = RequirementRow("b", "", _verdict(stroke, need_b), stroke, need_b, "rho3 stroke")
    need_c = STANDOFF + STANDOFF_TOL + INSERTION_DEPTH
    rows["c"] = RequirementRow("c", "", _verdict(stroke, need_c), stroke, need_c, "rho3 stroke covers standoff + nominal depth")
    l_b, center = 0.0, None
    try:
        res = max_inscribed(p, n=n, tolerance=tolerance, grid=grid)
        l_b, center = res.l_b_max, (res.x_c, res.y_c)
        note = f"square side 2*l_b, Lame n={n}"
    except DegenerateRegionError as exc:
        note = f"degenerate workspace: {exc}"
    rows["d"] = RequirementRow("d", "", _verdict(2 * l_b, SQUARE_SIDE), 2 * l_b, SQUARE_SIDE, note)
    rows["e"] = RequirementRow("e", "", "pass", float(DOF), float(DOF), "rho1, rho2, rho3")
    out = []
    for req in REQUIREMENTS:
        if req.letter in rows:
            r = rows[req.letter]
            out.append(RequirementRow(r.letter, req.title, r.status, r.measured, r.required, r.note))
        else:
            out.append(RequirementRow(req.letter, req.title, "not evaluable", note=_NOT_EVALUABLE[req.letter]))
    return StudyReport(p, out, l_b_max=l_b, center=center)
