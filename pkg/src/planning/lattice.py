"""Station x lateral-offset lattice laid over a corridor."""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from errors import InfeasibleCorridorError, InvalidInputError
from geometry.curve import FrenetPoint
from perception.reference import Corridor

ROW_EPSILON = 1e-9


@dataclass(frozen=True)
class LatticeConfig:
    """Lattice shape in meters.

    Attributes:
        horizon: Planning distance along the reference
        row_spacing: Station gap between rows
        lateral_count: Nodes per row
        lateral_margin: Keep-out distance from each boundary
    """

    horizon: float = 10.0
    row_spacing: float = 1.0
    lateral_count: int = 5
    lateral_margin: float = 0.11

    def __post_init__(self):
        if not math.isfinite(self.horizon) or self.horizon <= 0.0:
            raise InvalidInputError("horizon must be positive")
        if not math.isfinite(self.row_spacing) or self.row_spacing <= 0.0:
            raise InvalidInputError("row_spacing must be positive")
        if int(self.lateral_count) != self.lateral_count or self.lateral_count < 3 \
                or self.lateral_count % 2 == 0:
            raise InvalidInputError("lateral_count must be an odd integer of at least 3")
        if self.rows < 2:
            raise InvalidInputError("horizon must span at least two rows")
        if not math.isfinite(self.lateral_margin) or self.lateral_margin < 0.0:
            raise InvalidInputError("lateral_margin must be non-negative")

    @property
    def rows(self) -> int:
        return int(math.floor(self.horizon / self.row_spacing + ROW_EPSILON))


@dataclass(frozen=True)
class LatticeNode:
    """One lattice node; value and successor are filled in by the planner."""

    row: int
    col: int
    frenet: FrenetPoint
    cartesian: Tuple[float, float]
    value: float = math.inf
    successor: Optional[int] = None


@dataclass(frozen=True, eq=False)
class Lattice:
    """Rows of nodes, row 0 nearest the runner, column 0 the rightmost."""

    nodes: Tuple[Tuple[LatticeNode, ...], ...]

    @property
    def num_rows(self) -> int:
        return len(self.nodes)

    @property
    def num_cols(self) -> int:
        return len(self.nodes[0]) if self.nodes else 0

    def positions(self) -> np.ndarray:
        """Cartesian node positions, shape (rows, cols, 2)."""
        return np.array([[node.cartesian for node in row] for row in self.nodes], dtype=float)

    def offsets(self) -> np.ndarray:
        """Lateral offsets d, shape (rows, cols)."""
        return np.array([[node.frenet.d for node in row] for row in self.nodes], dtype=float)


def build_lattice(corridor: Corridor, config: LatticeConfig) -> Lattice:
    """Place the lattice on a corridor.

    Row r (1-based) sits at station r * row_spacing; its nodes span
    [-(w - margin), w - margin] evenly, w being the local half-width.

    Raises:
        InfeasibleCorridorError: If the reference is shorter than one row
            or the margin leaves no room on some row
    """
    reference = corridor.reference
    available = int(math.floor(reference.total_length / config.row_spacing + ROW_EPSILON))
    count = min(config.rows, available)
    if count < 1:
        raise InfeasibleCorridorError(
            f"reference of {reference.total_length:.2f} m is shorter than one row")

    stations = np.minimum(np.arange(1, count + 1) * config.row_spacing, reference.total_length)
    spans = np.asarray(corridor.half_width_at(stations), dtype=float) - config.lateral_margin
    if np.any(spans <= 0.0):
        row = int(np.flatnonzero(spans <= 0.0)[0]) + 1
        raise InfeasibleCorridorError(
            f"lateral margin {config.lateral_margin} m leaves no room on row {row}")

    lateral = np.linspace(-1.0, 1.0, int(config.lateral_count))
    offsets = spans[:, np.newaxis] * lateral[np.newaxis, :]
    grid = reference.to_cartesian(np.repeat(stations[:, np.newaxis], len(lateral), axis=1), offsets)

    rows = []
    for r in range(count):
        rows.append(tuple(
            LatticeNode(
                row=r,
                col=c,
                frenet=FrenetPoint(s=float(stations[r]), d=float(offsets[r, c])),
                cartesian=(float(grid[r, c, 0]), float(grid[r, c, 1])),
            )
            for c in range(len(lateral))
        ))
    return Lattice(nodes=tuple(rows))
