"""Per-frame episode records and the trace that collects them."""

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class EpisodeStatus(Enum):
    COMPLETED = 'completed'
    COLLIDED = 'collided'
    STOPPED = 'stopped'
    TIMEOUT = 'timeout'


@dataclass(frozen=True)
class FrameRecord:
    """State after one planning frame.

    Attributes:
        t: Time at the end of the frame (s)
        x, y, heading: Runner pose after the step
        lane: Runner lane after the step
        command: Emitted token
        yaw: Planned command yaw (None when no plan was made)
        min_clearance: Distance to the nearest obstacle footprint (None without obstacles)
        progress: Distance travelled along the start lane (m)
        corridor: 'lane', 'right', 'left', or 'none' when no plan was made
        degraded: Perception or planning failed and the previous command was reused
        on_track: Runner is inside some lane
    """

    t: float
    x: float
    y: float
    heading: float
    lane: int
    command: str
    yaw: Optional[float]
    min_clearance: Optional[float]
    progress: float
    corridor: str
    degraded: bool
    on_track: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FrameRecord':
        return cls(**{name: data[name] for name in cls.__dataclass_fields__})


@dataclass
class EpisodeTrace:
    scenario: str
    frames: List[FrameRecord] = field(default_factory=list)
    status: Optional[EpisodeStatus] = None

    @property
    def tokens(self) -> List[str]:
        return [frame.command for frame in self.frames]
