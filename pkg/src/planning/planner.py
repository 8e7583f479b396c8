"""Backward dynamic programming over the lattice."""

import dataclasses
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from errors import NoFeasiblePathError
from geometry.curve import Curve2D, build_curve, yaw_at
from perception.sensor import Obstacle
from planning.costs import CostParams, obstacle_costs, terminal_cost
from planning.lattice import Lattice

DEFAULT_LOOKAHEAD = 2.0
TIE_TOLERANCE = 1e-9
YAW_PROFILE_STEP = 0.5


@dataclass(frozen=True, eq=False)
class PlanResult:
    """Optimal path through the lattice.

    Attributes:
        waypoints: Start point followed by one node per row, shape (rows + 1, 2)
        path: Spline through the waypoints
        command_yaw: Path heading at the lookahead distance (radians)
        total_cost: Edge lengths plus obstacle and terminal costs
        columns: Chosen column in each row
        lattice: The lattice with every node's value and successor filled in
    """

    waypoints: np.ndarray
    path: Curve2D
    command_yaw: float
    total_cost: float
    columns: Tuple[int, ...]
    lattice: Lattice


def _pick(values: np.ndarray, offsets: np.ndarray) -> int:
    """Index of the minimum; near-ties go to the smallest |d|, then the lower index."""
    best = float(np.min(values))
    slack = TIE_TOLERANCE * max(1.0, abs(best)) if math.isfinite(best) else 0.0
    candidates = np.flatnonzero(values <= best + slack)
    ranked = np.lexsort((candidates, np.abs(offsets[candidates])))
    return int(candidates[ranked[0]])


def plan(start: Sequence[float], lattice: Lattice, obstacles: Sequence[Obstacle],
         params: CostParams, lookahead: float = DEFAULT_LOOKAHEAD) -> PlanResult:
    """Minimum-cost path from start through one node per row.

    The value of a node is its cheapest continuation to the last row:
    edge length plus the obstacle cost of every node entered, plus the
    terminal cost of the last node. Row 0 is entered from start.

    Raises:
        NoFeasiblePathError: If every route meets an infeasible node
    """
    start = np.asarray(start, dtype=float).reshape(2)
    positions = lattice.positions()
    offsets = lattice.offsets()
    rows, cols = offsets.shape

    entry_costs = obstacle_costs(positions.reshape(-1, 2), obstacles, params).reshape(rows, cols)

    values = np.empty((rows, cols))
    successors = np.full((rows, cols), -1, dtype=int)
    values[-1] = [terminal_cost(node, params) for node in lattice.nodes[-1]]

    for r in range(rows - 2, -1, -1):
        steps = np.linalg.norm(positions[r][:, np.newaxis, :] - positions[r + 1][np.newaxis], axis=-1)
        totals = steps + entry_costs[r + 1][np.newaxis] + values[r + 1][np.newaxis]
        for c in range(cols):
            j = _pick(totals[c], offsets[r + 1])
            successors[r, c] = j
            values[r, c] = totals[c, j]

    entry = np.linalg.norm(positions[0] - start, axis=-1) + entry_costs[0] + values[0]
    first = _pick(entry, offsets[0])
    if not math.isfinite(entry[first]):
        raise NoFeasiblePathError("every lattice path meets an obstacle")

    columns = [first]
    for r in range(rows - 1):
        columns.append(int(successors[r, columns[-1]]))

    waypoints = np.vstack([start, positions[np.arange(rows), columns]])
    path = build_curve(waypoints)
    command_yaw = yaw_at(path, min(lookahead, path.total_length))

    evaluated = tuple(
        tuple(
            dataclasses.replace(
                node,
                value=float(values[r, c]),
                successor=int(successors[r, c]) if r < rows - 1 else None,
            )
            for c, node in enumerate(row)
        )
        for r, row in enumerate(lattice.nodes)
    )

    return PlanResult(
        waypoints=waypoints,
        path=path,
        command_yaw=command_yaw,
        total_cost=float(entry[first]),
        columns=tuple(columns),
        lattice=Lattice(nodes=evaluated),
    )


def path_yaw_profile(result: PlanResult, step: float = YAW_PROFILE_STEP) -> List[Tuple[float, float]]:
    """(station, yaw) samples along the planned path, end point included."""
    length = result.path.total_length
    stations = np.arange(0.0, length, step)
    if length - stations[-1] > 1e-9:
        stations = np.append(stations, length)
    yaws = result.path.yaw(stations)
    return [(float(s), float(y)) for s, y in zip(stations, yaws)]


def blocked_rows(lattice: Lattice, obstacles: Sequence[Obstacle], params: CostParams) -> List[int]:
    """Rows in which every node is infeasible."""
    if not obstacles:
        return []
    rows, cols = lattice.num_rows, lattice.num_cols
    costs = obstacle_costs(lattice.positions().reshape(-1, 2), obstacles, params).reshape(rows, cols)
    return [int(r) for r in np.flatnonzero(np.all(np.isinf(costs), axis=1))]
