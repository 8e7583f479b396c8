"""Tests for the edge, obstacle and terminal costs."""

import math

import pytest
import numpy as np
from pathlib import Path

import sys
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from errors import InvalidInputError
from geometry.curve import FrenetPoint
from perception.sensor import Obstacle
from planning.costs import (
    CostParams,
    collision_distances,
    cost_dis,
    cost_obs,
    obstacle_costs,
    terminal_cost,
)
from planning.lattice import LatticeNode


def _node(d):
    return LatticeNode(row=9, col=0, frenet=FrenetPoint(s=10.0, d=d), cartesian=(10.0, d))


# =============================================================================
# TESTS FOR CostParams
# =============================================================================

class TestCostParams:
    """Validation of the cost weights."""

    def test_defaults(self):
        params = CostParams()
        assert (params.k, params.d_safe, params.terminal_weight) == (1.0, 0.5, 1.0)

    @pytest.mark.parametrize("kwargs", [
        {'k': 0.0},
        {'k': -1.0},
        {'d_safe': 0.0},
        {'terminal_weight': 0.0},
        {'k': float('inf')},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            CostParams(**kwargs)


# =============================================================================
# TESTS FOR cost_dis
# =============================================================================

class TestCostDis:
    """Euclidean edge length."""

    def test_three_four_five(self):
        assert cost_dis((0.0, 0.0), (3.0, 4.0)) == 5.0

    def test_diagonal(self):
        assert cost_dis((2.0, 0.0), (3.0, 1.0)) == pytest.approx(math.sqrt(2.0))

    def test_same_point(self):
        assert cost_dis((1.5, -2.0), (1.5, -2.0)) == 0.0


# =============================================================================
# TESTS FOR cost_obs
# =============================================================================

class TestCostObs:
    """The three branches of the obstacle cost."""

    def test_no_obstacles(self):
        assert cost_obs((0.0, 0.0), [], CostParams()) == 0.0

    def test_inverse_distance_branch(self):
        obstacle = Obstacle(position=(2.3, 0.0), radius=0.3)
        assert cost_obs((0.0, 0.0), [obstacle], CostParams()) == pytest.approx(0.5)

    def test_scale_factor(self):
        obstacle = Obstacle(position=(0.0, 2.3), radius=0.3)
        assert cost_obs((0.0, 0.0), [obstacle], CostParams(k=3.0)) == pytest.approx(1.5)

    def test_inside_safe_distance_is_infinite(self):
        obstacle = Obstacle(position=(0.7, 0.0), radius=0.3)
        assert math.isinf(cost_obs((0.0, 0.0), [obstacle], CostParams()))

    def test_exactly_safe_distance_is_infinite(self):
        obstacle = Obstacle(position=(1.0, 0.0), radius=0.5)
        assert collision_distances(np.array([[0.0, 0.0]]), [obstacle])[0] == 0.5
        assert math.isinf(cost_obs((0.0, 0.0), [obstacle], CostParams()))

    def test_nearest_obstacle_decides(self):
        near = Obstacle(position=(1.2, 0.0), radius=0.2)
        far = Obstacle(position=(0.0, 5.0), radius=0.2)
        assert cost_obs((0.0, 0.0), [far, near], CostParams()) == pytest.approx(1.0)

    def test_vectorized_matches_scalar(self):
        obstacles = [Obstacle(position=(2.0, 0.5), radius=0.3), Obstacle(position=(4.0, -1.0), radius=0.2)]
        params = CostParams(k=2.0)
        rng = np.random.default_rng(3)
        positions = rng.uniform(-1.0, 5.0, size=(50, 2))
        costs = obstacle_costs(positions, obstacles, params)
        for p, c in zip(positions, costs):
            assert c == pytest.approx(cost_obs(p, obstacles, params))

    def test_no_obstacles_distance_is_infinite(self):
        assert np.all(np.isinf(collision_distances(np.zeros((3, 2)), [])))


# =============================================================================
# TESTS FOR terminal_cost
# =============================================================================

class TestTerminalCost:
    """Distance of last-row nodes from the midline."""

    def test_last_row_grid(self):
        params = CostParams()
        costs = [terminal_cost(_node(d), params) for d in (-0.5, -0.25, 0.0, 0.25, 0.5)]
        assert costs == pytest.approx([0.5, 0.25, 0.0, 0.25, 0.5])

    def test_weight_scales_linearly(self):
        assert terminal_cost(_node(0.25), CostParams(terminal_weight=2.0)) == pytest.approx(0.5)
