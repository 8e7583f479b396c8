"""Episode summary metrics."""

from dataclasses import dataclass
from typing import Any, Dict, Optional

from errors import InvalidInputError
from guidance.commands import DirectionCommand
from simulation.trace import EpisodeTrace
from simulation.scenario import ScenarioSpec

# Corridors that plan a lane change; crossing a line under any other is a violation
SWITCH_CORRIDORS = ('right', 'left')

# metrics.json key -> Metrics attribute
METRIC_KEYS = {
    'status': 'status',
    'distance_m': 'distance',
    'elapsed_s': 'elapsed',
    'average_speed_mps': 'average_speed',
    'min_clearance_m': 'min_clearance',
    'lane_departures': 'lane_departures',
    'boundary_violations': 'boundary_violations',
    'final_lane': 'final_lane',
    'frames': 'frames',
    'degraded_frames': 'degraded_frames',
    'stop_frames': 'stop_frames',
}


@dataclass(frozen=True)
class Metrics:
    """Aggregates of one episode.

    A lane departure is any change of lane. A boundary violation is a frame
    off the track, or a lane change made while following the own-lane corridor.
    """

    distance: float
    elapsed: float
    average_speed: float
    min_clearance: Optional[float]
    lane_departures: int
    boundary_violations: int
    final_lane: int
    frames: int
    degraded_frames: int
    stop_frames: int
    status: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {key: getattr(self, attribute) for key, attribute in METRIC_KEYS.items()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Metrics':
        return cls(**{attribute: data[key] for key, attribute in METRIC_KEYS.items()})


def compute_metrics(trace: EpisodeTrace, spec: ScenarioSpec) -> Metrics:
    """Aggregate a trace.

    Raises:
        InvalidInputError: If the trace has no frames
    """
    if not trace.frames:
        raise InvalidInputError("cannot compute metrics of an empty trace")

    last = trace.frames[-1]
    distance = last.progress
    elapsed = last.t
    average_speed = distance / elapsed if elapsed > 0.0 else 0.0

    clearances = [f.min_clearance for f in trace.frames if f.min_clearance is not None]

    departures = 0
    violations = 0
    lane = spec.start_lane
    for frame in trace.frames:
        changed = frame.lane != lane
        if changed:
            departures += 1
        if not frame.on_track or (changed and frame.corridor not in SWITCH_CORRIDORS):
            violations += 1
        lane = frame.lane

    return Metrics(
        distance=distance,
        elapsed=elapsed,
        average_speed=average_speed,
        min_clearance=min(clearances) if clearances else None,
        lane_departures=departures,
        boundary_violations=violations,
        final_lane=last.lane,
        frames=len(trace.frames),
        degraded_frames=sum(1 for f in trace.frames if f.degraded),
        stop_frames=sum(1 for f in trace.frames if f.command == DirectionCommand.STOP.value),
        status=trace.status.value if trace.status is not None else None,
    )
