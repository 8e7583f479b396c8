"""Lattice construction, costs and dynamic-programming path search."""

from .costs import CostParams, collision_distances, cost_dis, cost_obs, obstacle_costs
from .lattice import Lattice, LatticeConfig, LatticeNode, build_lattice
from .planner import PlanResult, blocked_rows, path_yaw_profile, plan
from .frame import FramePlan, PlannerConfig, plan_frame

__all__ = [
    'CostParams', 'collision_distances', 'cost_dis', 'cost_obs', 'obstacle_costs',
    'Lattice', 'LatticeConfig', 'LatticeNode', 'build_lattice',
    'PlanResult', 'blocked_rows', 'path_yaw_profile', 'plan',
    'FramePlan', 'PlannerConfig', 'plan_frame',
]
