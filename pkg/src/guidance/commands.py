"""Direction commands derived from the planned yaw, one per planning frame.

The frontal field is split into five sectors: a narrow forward sector,
two slight-turn sectors and two hard-turn sectors. Angles on a sector
boundary belong to the gentler command.
"""

import math
from dataclasses import dataclass
from enum import Enum

from errors import InvalidInputError


class DirectionCommand(Enum):
    """Direction instruction; the value is the emitted token."""

    FORWARD = 'forward'
    LEFT_FORWARD = 'left-forward'
    RIGHT_FORWARD = 'right-forward'
    TURN_LEFT = 'turn-left'
    TURN_RIGHT = 'turn-right'
    STOP = 'stop'

    def mirrored(self) -> 'DirectionCommand':
        """The same command with left and right exchanged."""
        return _MIRROR.get(self, self)


_MIRROR = {
    DirectionCommand.LEFT_FORWARD: DirectionCommand.RIGHT_FORWARD,
    DirectionCommand.RIGHT_FORWARD: DirectionCommand.LEFT_FORWARD,
    DirectionCommand.TURN_LEFT: DirectionCommand.TURN_RIGHT,
    DirectionCommand.TURN_RIGHT: DirectionCommand.TURN_LEFT,
}


@dataclass(frozen=True)
class SectorConfig:
    """Sector boundaries in radians."""

    forward_half_angle: float = math.radians(5.0)
    slight_turn_limit: float = math.radians(20.0)

    def __post_init__(self):
        if not 0.0 < self.forward_half_angle < self.slight_turn_limit < math.pi / 2.0:
            raise InvalidInputError(
                "sector angles must satisfy 0 < forward_half_angle < slight_turn_limit < pi/2")


def command_from_yaw(yaw: float, sectors: SectorConfig = SectorConfig()) -> DirectionCommand:
    """Map a body-frame yaw (radians, positive left) to a direction command."""
    yaw = float(yaw)
    if not math.isfinite(yaw):
        raise InvalidInputError(f"yaw must be finite, got {yaw}")

    magnitude = abs(yaw)
    if magnitude <= sectors.forward_half_angle:
        return DirectionCommand.FORWARD
    if magnitude <= sectors.slight_turn_limit:
        return DirectionCommand.LEFT_FORWARD if yaw > 0 else DirectionCommand.RIGHT_FORWARD
    return DirectionCommand.TURN_LEFT if yaw > 0 else DirectionCommand.TURN_RIGHT


def emit(command: DirectionCommand) -> str:
    return command.value


def parse_token(token: str) -> DirectionCommand:
    """Inverse of emit."""
    try:
        return DirectionCommand(token)
    except ValueError:
        raise InvalidInputError(f"unknown direction token: {token!r}") from None
