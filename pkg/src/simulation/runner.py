"""Runner kinematics: a unicycle that obeys direction commands."""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from errors import InvalidInputError
from guidance.commands import DirectionCommand
from track.layout import TrackModel, lane_at


def wrap_angle(angle: float) -> float:
    """Normalize an angle into (-pi, pi]."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class RunnerState:
    position: Tuple[float, float]
    heading: float
    speed: float
    current_lane: int

    def __post_init__(self):
        if not self.speed >= 0.0:
            raise InvalidInputError("speed must be non-negative")

    @property
    def pose(self) -> Tuple[float, float, float]:
        return self.position[0], self.position[1], self.heading


@dataclass(frozen=True)
class TurnRates:
    """Heading rates in rad/s for the slight and hard turn commands."""

    slight: float = math.radians(15.0)
    hard: float = math.radians(45.0)

    def __post_init__(self):
        if not 0.0 <= self.slight <= self.hard:
            raise InvalidInputError("turn rates must satisfy 0 <= slight <= hard")

    def rate(self, command: DirectionCommand) -> float:
        """Signed heading rate for a command (positive turns left)."""
        return {
            DirectionCommand.LEFT_FORWARD: self.slight,
            DirectionCommand.RIGHT_FORWARD: -self.slight,
            DirectionCommand.TURN_LEFT: self.hard,
            DirectionCommand.TURN_RIGHT: -self.hard,
        }.get(command, 0.0)


def step_runner(state: RunnerState, command: DirectionCommand, dt: float,
                turn_rates: TurnRates = TurnRates(),
                track: Optional[TrackModel] = None) -> RunnerState:
    """Advance the runner by dt seconds under a command.

    Stop holds the runner in place for the step. When a track is given the
    current lane follows the position; off the track the last lane is kept.
    """
    if not dt > 0.0:
        raise InvalidInputError("dt must be positive")

    if command is DirectionCommand.STOP:
        return state

    heading = wrap_angle(state.heading + turn_rates.rate(command) * dt)
    x = state.position[0] + state.speed * dt * math.cos(heading)
    y = state.position[1] + state.speed * dt * math.sin(heading)

    lane = state.current_lane
    if track is not None:
        lane = lane_at(track, (x, y)) or lane

    return RunnerState(position=(x, y), heading=heading, speed=state.speed, current_lane=lane)
