"""Edge and node costs for the lattice search."""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from errors import InvalidInputError
from perception.sensor import Obstacle
from planning.lattice import LatticeNode


@dataclass(frozen=True)
class CostParams:
    """Weights for the lattice costs.

    Attributes:
        k: Obstacle weight; node cost is k / d_col
        d_safe: Collision distances at or below this make a node infeasible
        terminal_weight: Per-meter penalty on the last row's lateral offset
    """

    k: float = 1.0
    d_safe: float = 0.5
    terminal_weight: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.k) or self.k <= 0.0:
            raise InvalidInputError("k must be positive")
        if not math.isfinite(self.d_safe) or self.d_safe <= 0.0:
            raise InvalidInputError("d_safe must be positive")
        if not math.isfinite(self.terminal_weight) or self.terminal_weight <= 0.0:
            raise InvalidInputError("terminal_weight must be positive")


def cost_dis(p1: Sequence[float], p2: Sequence[float]) -> float:
    """Euclidean length of an edge."""
    return float(np.hypot(p2[0] - p1[0], p2[1] - p1[1]))


def collision_distances(positions: np.ndarray, obstacles: Sequence[Obstacle]) -> np.ndarray:
    """Distance from each position to the nearest obstacle footprint (inf if none)."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if not obstacles:
        return np.full(len(positions), np.inf)
    centers = np.array([o.position for o in obstacles], dtype=float)
    radii = np.array([o.radius for o in obstacles], dtype=float)
    gaps = np.linalg.norm(positions[:, np.newaxis, :] - centers[np.newaxis], axis=-1) - radii
    return gaps.min(axis=1)


def obstacle_costs(positions: np.ndarray, obstacles: Sequence[Obstacle],
                   params: CostParams) -> np.ndarray:
    """Vectorized cost_obs over an array of positions."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if not obstacles:
        return np.zeros(len(positions))
    d_col = collision_distances(positions, obstacles)
    costs = np.full(len(positions), np.inf)
    clear = d_col > params.d_safe
    costs[clear] = params.k / d_col[clear]
    return costs


def cost_obs(position: Sequence[float], obstacles: Sequence[Obstacle],
             params: CostParams) -> float:
    """Obstacle cost of a node: 0 without obstacles, k / d_col when clear, inf otherwise."""
    return float(obstacle_costs(np.asarray(position, dtype=float)[np.newaxis], obstacles, params)[0])


def terminal_cost(node: LatticeNode, params: CostParams) -> float:
    """Last-row cost: distance of the node from the corridor midline."""
    return params.terminal_weight * abs(node.frenet.d)
