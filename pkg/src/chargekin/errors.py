"""Exception hierarchy.

Every kinematic failure carries an ``exit_code`` so the command line front end
can map library errors onto its stable exit-code contract without a lookup
table of its own.
"""

from __future__ import annotations


class ChargekinError(Exception):
    exit_code = 1


class DesignError(ChargekinError, ValueError):
    """Invalid design parameters or configuration text."""

    exit_code = 2


class ConfigParseError(DesignError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class MissingKeyError(DesignError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("missing keys: " + ", ".join(self.missing))


class UnknownKeyError(DesignError):
    def __init__(self, lineno: int, key: str):
        self.lineno = lineno
        self.key = key
        super().__init__(f"line {lineno}: unknown key {key!r}")


class InvariantError(DesignError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = f"invariant violated: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class KinematicsError(ChargekinError):
    kind = "kinematics"


class UnreachableError(KinematicsError):
    kind = "unreachable"
    exit_code = 3


class NoAssemblyError(UnreachableError):
    kind = "no-assembly"


class OffAxisError(UnreachableError):
    kind = "off-axis"


class NegativeDirectionError(UnreachableError):
    kind = "negative-direction"


class StrokeError(KinematicsError):
    kind = "stroke"
    exit_code = 4

    def __init__(self, actuator: str, bound: str, value: float, limit: float, stage: str = ""):
        self.actuator = actuator
        self.bound = bound
        self.value = value
        self.limit = limit
        self.stage = stage
        rel = "<" if bound == "min" else ">"
        prefix = f"{stage}: " if stage else ""
        super().__init__(
            f"{prefix}{actuator}={value:.6f} {rel} {actuator}_{bound}={limit:.6f}"
        )


class DepthExceedsStrokeError(StrokeError):
    kind = "depth-exceeds-stroke"

    def __init__(self, depth: float, stroke: float):
        self.depth = depth
        self.stroke = stroke
        KinematicsError.__init__(
            self, f"insertion depth {depth:.6f} exceeds rho3 stroke {stroke:.6f}"
        )


class ConsistencyError(KinematicsError):
    kind = "consistency"
    exit_code = 3


class SingularityError(KinematicsError):
    kind = "singularity"
    exit_code = 5


class DegenerateRegionError(KinematicsError):
    kind = "degenerate-region"
    exit_code = 6
