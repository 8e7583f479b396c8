"""Episode output files and their readers.

An episode directory holds:
    trace.jsonl         one FrameRecord per line
    metrics.json        Metrics summary
    trajectory.csv      t, x, y for plotting
    scenario.json       the effective scenario (world-coordinate obstacles)
    observations.jsonl  optional, one Observation per frame
    plans.jsonl         optional, one frame plan per frame
"""

import csv
import json
import math
import sys
from pathlib import Path
from typing import IO, Any, Dict, List, Optional

import numpy as np

from guidance.commands import parse_token
from perception.sensor import Observation, Obstacle
from planning.frame import FramePlan
from planning.planner import path_yaw_profile
from simulation.metrics import Metrics
from simulation.scenario import ScenarioSpec, scenario_to_dict
from simulation.trace import EpisodeTrace, FrameRecord

TRACE_FILE = 'trace.jsonl'
METRICS_FILE = 'metrics.json'
TRAJECTORY_FILE = 'trajectory.csv'
SCENARIO_FILE = 'scenario.json'
OBSERVATIONS_FILE = 'observations.jsonl'
PLANS_FILE = 'plans.jsonl'

TRAJECTORY_COLUMNS = ('t', 'x', 'y')


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy values to JSON types; non-finite floats become None."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dumps(value: Any, **kwargs) -> str:
    return json.dumps(to_jsonable(value), allow_nan=False, **kwargs)


def _points(array: np.ndarray) -> List[List[float]]:
    return [[float(x), float(y)] for x, y in np.asarray(array, dtype=float).reshape(-1, 2)]


def observation_to_dict(obs: Observation) -> Dict[str, Any]:
    return {
        'timestamp_s': obs.timestamp,
        'left_boundary': _points(obs.left_boundary),
        'right_boundary': _points(obs.right_boundary),
        'left_lane_boundary': _points(obs.left_lane_boundary),
        'right_lane_boundary': _points(obs.right_lane_boundary),
        'obstacles': [
            {'x_m': o.position[0], 'y_m': o.position[1], 'radius_m': o.radius}
            for o in obs.obstacles
        ],
    }


def observation_from_dict(data: Dict[str, Any]) -> Observation:
    def polyline(key):
        return np.asarray(data[key], dtype=float).reshape(-1, 2)

    return Observation(
        left_boundary=polyline('left_boundary'),
        right_boundary=polyline('right_boundary'),
        left_lane_boundary=polyline('left_lane_boundary'),
        right_lane_boundary=polyline('right_lane_boundary'),
        obstacles=tuple(Obstacle(position=(o['x_m'], o['y_m']), radius=o['radius_m'])
                        for o in data['obstacles']),
        timestamp=data['timestamp_s'],
    )


def frame_plan_to_dict(frame_plan: FramePlan) -> Dict[str, Any]:
    """Corridor, evaluated lattice and chosen path of one frame."""
    corridor = frame_plan.corridor
    reference = corridor.reference
    result = frame_plan.result
    knots = reference.table_points[::reference.samples_per_segment]
    return {
        'corridor': frame_plan.corridor_kind,
        'blocked_rows': list(frame_plan.blocked),
        'reference': {
            'length_m': reference.total_length,
            'knots': _points(knots),
            'stations_m': corridor.stations,
            'half_widths_m': corridor.half_widths,
        },
        'lattice': [
            [
                {
                    'row': node.row,
                    'col': node.col,
                    's_m': node.frenet.s,
                    'd_m': node.frenet.d,
                    'x_m': node.cartesian[0],
                    'y_m': node.cartesian[1],
                    'value': node.value,
                    'successor': node.successor,
                }
                for node in row
            ]
            for row in result.lattice.nodes
        ],
        'plan': {
            'columns': list(result.columns),
            'waypoints': _points(result.waypoints),
            'total_cost': result.total_cost,
            'command_yaw_rad': result.command_yaw,
            'yaw_profile': [list(sample) for sample in path_yaw_profile(result)],
        },
    }


class EpisodeWriter:
    """Writes one episode's files into its output directory.

    Use on_frame as the run_episode callback, then call finish.
    """

    def __init__(self, out_dir: Path, dump_observations: bool = False, dump_plans: bool = False):
        self.out_dir = Path(out_dir)
        self.dump_observations = dump_observations
        self.dump_plans = dump_plans
        self._streams: Dict[str, IO[str]] = {}

    def __enter__(self) -> 'EpisodeWriter':
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        for stream in self._streams.values():
            stream.close()
        self._streams.clear()

    def _stream(self, name: str) -> IO[str]:
        if name not in self._streams:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            self._streams[name] = open(self.out_dir / name, 'w')
        return self._streams[name]

    def on_frame(self, record: FrameRecord, obs: Observation,
                 frame_plan: Optional[FramePlan]) -> None:
        if self.dump_observations:
            self._stream(OBSERVATIONS_FILE).write(dumps(observation_to_dict(obs)) + '\n')
        if self.dump_plans:
            entry = {'t': record.t, 'command': record.command,
                     'plan': frame_plan_to_dict(frame_plan) if frame_plan is not None else None}
            self._stream(PLANS_FILE).write(dumps(entry) + '\n')

    def _write(self, name: str, content: str) -> Path:
        path = self.out_dir / name
        with open(path, 'w', newline='') as f:
            f.write(content)
        print(f"  Wrote {path}", file=sys.stderr)
        return path

    def finish(self, trace: EpisodeTrace, metrics: Metrics, spec: ScenarioSpec) -> List[Path]:
        """Write trace, metrics, trajectory and scenario files.

        Returns:
            Paths of the written files
        """
        self.close()
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written = [
            self._write(TRACE_FILE, ''.join(dumps(f.to_dict()) + '\n' for f in trace.frames)),
            self._write(METRICS_FILE, dumps(metrics.to_dict(), indent=2) + '\n'),
            self._write(TRAJECTORY_FILE, _trajectory_csv(trace)),
            self._write(SCENARIO_FILE, dumps(scenario_to_dict(spec), indent=2) + '\n'),
        ]
        for name, enabled in ((OBSERVATIONS_FILE, self.dump_observations), (PLANS_FILE, self.dump_plans)):
            if enabled:
                print(f"  Wrote {self.out_dir / name}", file=sys.stderr)
                written.append(self.out_dir / name)
        return written


def _trajectory_csv(trace: EpisodeTrace) -> str:
    lines = [','.join(TRAJECTORY_COLUMNS)]
    lines.extend(f"{f.t!r},{f.x!r},{f.y!r}" for f in trace.frames)
    return '\n'.join(lines) + '\n'


# -----------------------------------------------------------------------------
# Readers
# -----------------------------------------------------------------------------

def read_jsonl(path: Path) -> List[Dict[str, Any]]:
    with open(path, 'r') as f:
        return [json.loads(line) for line in f if line.strip()]


def read_trace(path: Path) -> List[FrameRecord]:
    records = [FrameRecord.from_dict(entry) for entry in read_jsonl(path)]
    for record in records:
        parse_token(record.command)
    return records


def read_metrics(path: Path) -> Metrics:
    with open(path, 'r') as f:
        return Metrics.from_dict(json.load(f))


def read_trajectory(path: Path) -> np.ndarray:
    """trajectory.csv as an array of (t, x, y) rows."""
    with open(path, 'r', newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        if tuple(header) != TRAJECTORY_COLUMNS:
            raise ValueError(f"unexpected trajectory header: {header}")
        return np.array([[float(v) for v in row] for row in reader], dtype=float).reshape(-1, 3)


def read_observations(path: Path) -> List[Observation]:
    return [observation_from_dict(entry) for entry in read_jsonl(path)]
