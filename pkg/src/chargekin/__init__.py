"""Kinematics and workspace synthesis for a P-Pi-R-P + linear charging robot."""

from .alpha import alpha_constraints, alpha_fk, alpha_ik, alpha_jacobians, singularity_margin
from .beta_gamma import BetaPose, beta_fk, beta_ik, gamma_fk, gamma_ik
from .design import (
    DesignParams,
    JointVector,
    PlanarPose,
    SpatialPose,
    WorkingMode,
    ZOE_DESIGN,
    dump_design,
    load_design,
    validate_joints,
)
from .placement import LamePlacement, lame_boundary, max_inscribed, placement_feasible, placement_region
from .trajectory import plan_insertion, plan_line
from .workspace import boundary, membership, singularity_locus

__version__ = "0.1.0"

__all__ = [
    "BetaPose", "DesignParams", "JointVector", "LamePlacement", "PlanarPose", "SpatialPose",
    "WorkingMode", "ZOE_DESIGN", "alpha_constraints", "alpha_fk", "alpha_ik", "alpha_jacobians",
    "beta_fk", "beta_ik", "boundary", "dump_design", "gamma_fk", "gamma_ik", "lame_boundary",
    "load_design", "max_inscribed", "membership", "placement_feasible", "placement_region",
    "plan_insertion", "plan_line", "singularity_locus", "singularity_margin", "validate_joints",
]
