"""Design parameters, poses, joint vectors and the ``key = value`` config format.

All lengths are millimetres and all angles radians. Every value type here is a
frozen dataclass, so instances can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import MISSING, dataclass, field, fields, replace
from typing import Optional

from .errors import (
    ConfigParseError,
    InvariantError,
    MissingKeyError,
    StrokeError,
    UnknownKeyError,
)

__all__ = [
    "DesignParams",
    "JointVector",
    "PlanarPose",
    "SpatialPose",
    "WorkingMode",
    "ZOE_DESIGN",
    "load_design",
    "dump_design",
    "validate_joints",
    "FIELD_ORDER",
    "REQUIRED_KEYS",
]


@dataclass(frozen=True)
class DesignParams:
    """Geometric constants of the hybrid charging robot.

    The planar stage has two rails carrying actuators ``rho1`` (left) and
    ``rho2`` (right), each driving an arm of length ``L`` to the platform
    points B and C, which are ``L3`` apart with midpoint V. The insertion
    actuator ``rho3`` is inclined by ``theta`` and carries the plug point P.
    """

    L: float
    L2: float
    L3: float
    rho1_min: float
    rho1_max: float
    rho2_min: float
    rho2_max: float
    theta: float
    rho3_min: float
    rho3_max: float
    e1x: float = 0.0
    e1y: float = 0.0
    e2x: float = 0.0
    e2y: float = 0.0
    e_py: float = 20.0
    e3y: float = 0.0
    e3z: float = 0.0
    e4y: float = 0.0
    e4z: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvariantError("numeric fields", f"{f.name} is not a number")
            if not math.isfinite(value):
                raise InvariantError("finite fields", f"{f.name}={value}")
            object.__setattr__(self, f.name, float(value))
        if not self.L > 0:
            raise InvariantError("L > 0", f"L={self.L}")
        if not self.L2 > 0:
            raise InvariantError("L2 > 0", f"L2={self.L2}")
        if not self.L3 >= 0:
            raise InvariantError("L3 >= 0", f"L3={self.L3}")
        if not self.L2 > self.L3:
            raise InvariantError("L2 > L3", f"L2={self.L2}, L3={self.L3}")
        for k in (1, 2, 3):
            lo, hi = getattr(self, f"rho{k}_min"), getattr(self, f"rho{k}_max")
            if not lo <= hi:
                raise InvariantError(f"rho{k}_min <= rho{k}_max", f"{lo} > {hi}")
        if not 0 < self.theta < math.pi / 2:
            raise InvariantError("0 < theta < pi/2", f"theta={self.theta}")
        if not self.e_py > 0:
            raise InvariantError("e_py > 0", f"e_py={self.e_py}")

    def stroke(self, k: int) -> tuple[float, float]:
        return getattr(self, f"rho{k}_min"), getattr(self, f"rho{k}_max")

    def replace(self, **changes) -> "DesignParams":
        return replace(self, **changes)


FIELD_ORDER = tuple(f.name for f in fields(DesignParams))
REQUIRED_KEYS = tuple(
    f.name for f in fields(DesignParams) if f.default is MISSING
)

#: Main sizes of the built prototype with default offsets and strokes.
ZOE_DESIGN = DesignParams(
    L=532.0,
    L2=1300.0,
    L3=160.0,
    rho1_min=0.0,
    rho1_max=500.0,
    rho2_min=0.0,
    rho2_max=500.0,
    theta=math.pi / 6,
    rho3_min=0.0,
    rho3_max=200.0,
)


@dataclass(frozen=True)
class JointVector:
    rho1: float
    rho2: float
    rho3: Optional[float] = None
    validated: bool = field(default=False, compare=False)

    def as_tuple(self) -> tuple:
        if self.rho3 is None:
            return (self.rho1, self.rho2)
        return (self.rho1, self.rho2, self.rho3)


@dataclass(frozen=True)
class PlanarPose:
    """Position of V, the midpoint of the platform joints B and C."""

    x: float
    y: float


@dataclass(frozen=True)
class SpatialPose:
    """``x`` is the abscissa of V, ``y`` the vertical and ``z`` the insertion depth of P."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class WorkingMode:
    """Branch selectors.

    ``branch1``/``branch2`` pick the sign in front of the square root of the
    inverse kinematics for the left and right arm (-1 is the accessible
    aspect: each actuator stays on the outer side of its arm). ``assembly``
    picks the forward-kinematics solution on the left (+1, "upper") or right
    (-1, "lower") of the directed line joining the two circle centers.
    """

    branch1: int = -1
    branch2: int = -1
    assembly: int = 1

    def __post_init__(self):
        for name in ("branch1", "branch2", "assembly"):
            if getattr(self, name) not in (-1, 1):
                raise ValueError(f"{name} must be -1 or +1")

    @classmethod
    def accessible(cls, assembly: int = 1) -> "WorkingMode":
        return cls(-1, -1, assembly)

    @property
    def is_accessible(self) -> bool:
        return self.branch1 == -1 and self.branch2 == -1

    def with_assembly(self, assembly: int) -> "WorkingMode":
        return replace(self, assembly=assembly)


def _parse_number(text: str, lineno: int, key: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigParseError(lineno, f"{key}: not a decimal number: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigParseError(lineno, f"{key}: value must be finite, got {text!r}")
    return value


def load_design(config_text: str) -> DesignParams:
    """Parse ``key = value`` lines into a validated :class:`DesignParams`.

    Blank lines and ``#`` comments are ignored. Offsets (``e*``) fall back to
    their defaults when absent; lengths, strokes and ``theta`` are required.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(config_text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(lineno, f"expected 'key = value', got {raw.strip()!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if not key:
            raise ConfigParseError(lineno, "empty key")
        if key not in FIELD_ORDER:
            raise UnknownKeyError(lineno, key)
        if key in values:
            raise ConfigParseError(lineno, f"duplicate key {key!r}")
        values[key] = _parse_number(value, lineno, key)
    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise MissingKeyError(missing)
    return DesignParams(**values)


def dump_design(p: DesignParams) -> str:
    """Serialize in :data:`FIELD_ORDER`; ``repr`` keeps floats bit-exact."""
    lines = ["# chargekin design parameters (mm, rad)"]
    lines += [f"{name} = {getattr(p, name)!r}" for name in FIELD_ORDER]
    return "\n".join(lines) + "\n"


def validate_joints(p: DesignParams, q: JointVector) -> JointVector:
    """Return ``q`` flagged as validated, or raise :class:`StrokeError`.

    Stroke intervals are closed. ``rho3`` is checked only when present.
    """
    for k in (1, 2, 3):
        value = getattr(q, f"rho{k}")
        if value is None:
            continue
        lo, hi = p.stroke(k)
        if not math.isfinite(value):
            raise StrokeError(f"rho{k}", "min", value, lo)
        if value < lo:
            raise StrokeError(f"rho{k}", "min", value, lo)
        if value > hi:
            raise StrokeError(f"rho{k}", "max", value, hi)
    return replace(q, validated=True)
