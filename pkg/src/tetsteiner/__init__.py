"""Weighted Steiner trees for four points in space, built from the Simpson line."""

from .degeneracy import DegeneracyReport, check_nondegenerate
from .equilibrium import WeightSystem, cone_quantities, melzak_quantities, node_angles
from .errors import SteinerError
from .ft import FtSolution, recover_F, solve_ft, solve_ft_system
from .geometry import SkewFrame, TetInstance, interedge_angle, skew_frame
from .oracle import minimize_single_node, minimize_two_nodes, weighted_median
from .simpson import (
    SimpsonSolution,
    SteinerTree,
    build_tree,
    fixed_point_maps,
    recover_nodes,
    solve_instance,
    solve_simpson,
    tree_cost,
)
from .twist import TwistReport, twist_angle, twist_angle_normal_oracle

__version__ = "0.1.0"

__all__ = [
    "DegeneracyReport", "FtSolution", "SimpsonSolution", "SkewFrame", "SteinerError",
    "SteinerTree", "TetInstance", "TwistReport", "WeightSystem",
    "build_tree", "check_nondegenerate", "cone_quantities", "fixed_point_maps",
    "interedge_angle", "melzak_quantities", "minimize_single_node", "minimize_two_nodes",
    "node_angles", "recover_F", "recover_nodes", "skew_frame", "solve_ft", "solve_ft_system",
    "solve_instance", "solve_simpson", "tree_cost", "twist_angle", "twist_angle_normal_oracle",
    "weighted_median",
]
