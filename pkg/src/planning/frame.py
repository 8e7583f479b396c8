"""One planning cycle: observation in, path and command heading out."""

from dataclasses import dataclass, field
from typing import Tuple

from errors import InfeasibleCorridorError, InsufficientPerceptionError, NoFeasiblePathError
from perception.reference import Corridor, reference_from_observation
from perception.sensor import Observation
from planning.costs import CostParams
from planning.lattice import Lattice, LatticeConfig, build_lattice
from planning.planner import DEFAULT_LOOKAHEAD, PlanResult, blocked_rows, plan


ORIGIN = (0.0, 0.0)
SWITCH_ORDER = ('right', 'left')


@dataclass(frozen=True)
class PlannerConfig:
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    costs: CostParams = field(default_factory=CostParams)
    lookahead: float = DEFAULT_LOOKAHEAD
    allow_lane_switch: bool = True


@dataclass(frozen=True, eq=False)
class FramePlan:
    """Planning output for one frame.

    Attributes:
        corridor_kind: 'lane', or the side ('right'/'left') the corridor
            was widened to when the lane itself is blocked
        corridor: Corridor the lattice was built on
        lattice: Lattice before evaluation
        result: Optimal plan
        blocked: Fully blocked rows of the runner's own lane
    """

    corridor_kind: str
    corridor: Corridor
    lattice: Lattice
    result: PlanResult
    blocked: Tuple[int, ...] = ()


def plan_frame(obs: Observation, config: PlannerConfig) -> FramePlan:
    """Plan from the runner's position through the perceived corridor.

    When a row of the own-lane lattice is fully blocked and lane switching
    is allowed, corridors widened over the right and then the left
    adjacent lane are tried in turn.

    Raises:
        InsufficientPerceptionError: If the lane boundaries are not usable
        InfeasibleCorridorError: If the lane is too narrow for the lattice
        NoFeasiblePathError: If no corridor admits a path
    """
    corridor = reference_from_observation(obs)
    lattice = build_lattice(corridor, config.lattice)
    blocked = tuple(blocked_rows(lattice, obs.obstacles, config.costs))

    if not blocked or not config.allow_lane_switch:
        result = plan(ORIGIN, lattice, obs.obstacles, config.costs, config.lookahead)
        return FramePlan('lane', corridor, lattice, result, blocked)

    for side in SWITCH_ORDER:
        try:
            wide = reference_from_observation(obs, widen=side)
            wide_lattice = build_lattice(wide, config.lattice)
            result = plan(ORIGIN, wide_lattice, obs.obstacles, config.costs, config.lookahead)
        except (InsufficientPerceptionError, InfeasibleCorridorError, NoFeasiblePathError):
            continue
        return FramePlan(side, wide, wide_lattice, result, blocked)

    raise NoFeasiblePathError(f"lane blocked at rows {list(blocked)} and no adjacent corridor is passable")
