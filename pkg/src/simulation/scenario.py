"""Scenario and frame files: strict parsing into ScenarioSpec.

Scenario files are JSON or YAML objects whose field names carry their
units. Unknown keys are rejected; missing sections keep library defaults.
"""

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import yaml

from errors import GuidanceError, ScenarioError
from guidance.commands import SectorConfig
from perception.sensor import Obstacle, SensorConfig
from planning.costs import CostParams
from planning.frame import PlannerConfig
from planning.lattice import LatticeConfig
from simulation.runner import TurnRates
from track.layout import TrackLayout, layout_pose

SCENARIO_KINDS = ('safe', 'detour', 'switch', 'free')

DEFAULT_GOAL_DISTANCE = 400.0
DEFAULT_SPEED = 1.34
DEFAULT_PLANNING_RATE = 10.0
DEFAULT_POINTS_PER_ARC = 360
DEFAULT_STOP_TIMEOUT = 5.0
DEFAULT_TIMEOUT_FACTOR = 3.0


@dataclass(frozen=True)
class ScenarioSpec:
    """Everything needed to run one closed-loop episode.

    Obstacles are held in world coordinates.
    """

    name: str = 'scenario'
    kind: str = 'safe'
    seed: int = 0
    layout: TrackLayout = field(default_factory=TrackLayout)
    points_per_arc: int = DEFAULT_POINTS_PER_ARC
    start_lane: int = 1
    start_station: float = 0.0
    speed: float = DEFAULT_SPEED
    goal_distance: float = DEFAULT_GOAL_DISTANCE
    planning_rate: float = DEFAULT_PLANNING_RATE
    obstacles: Tuple[Obstacle, ...] = ()
    sensor: SensorConfig = field(default_factory=SensorConfig)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    sectors: SectorConfig = field(default_factory=SectorConfig)
    turn_rates: TurnRates = field(default_factory=TurnRates)
    stop_timeout: float = DEFAULT_STOP_TIMEOUT
    timeout_factor: float = DEFAULT_TIMEOUT_FACTOR

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ScenarioError(f"must be one of {', '.join(SCENARIO_KINDS)}", 'kind')
        if self.seed < 0:
            raise ScenarioError("must be non-negative", 'seed')
        if not 1 <= self.start_lane <= self.layout.num_lanes:
            raise ScenarioError(f"must lie in 1..{self.layout.num_lanes}", 'runner.start_lane')
        if not self.speed > 0.0:
            raise ScenarioError("must be positive", 'runner.speed_mps')
        if not self.goal_distance > 0.0:
            raise ScenarioError("must be positive", 'goal_distance_m')
        if not self.planning_rate > 0.0:
            raise ScenarioError("must be positive", 'planning_rate_hz')
        if not self.stop_timeout > 0.0:
            raise ScenarioError("must be positive", 'limits.stop_timeout_s')
        if not self.timeout_factor >= 1.0:
            raise ScenarioError("must be at least 1", 'limits.timeout_factor')

    @property
    def dt(self) -> float:
        return 1.0 / self.planning_rate

    @property
    def time_budget(self) -> float:
        """Simulated time allowed before the episode times out."""
        return self.timeout_factor * self.goal_distance / self.speed


# -----------------------------------------------------------------------------
# Field readers
# -----------------------------------------------------------------------------

def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"expected a number, got {value!r}", path)
    if not math.isfinite(value):
        raise ScenarioError("must be finite", path)
    return float(value)


def _integer(value: Any, path: str) -> int:
    number = _number(value, path)
    if number != int(number):
        raise ScenarioError(f"expected an integer, got {value!r}", path)
    return int(number)


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ScenarioError(f"expected true or false, got {value!r}", path)
    return value


def _string(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioError(f"expected a non-empty string, got {value!r}", path)
    return value


def _degrees(value: Any, path: str) -> float:
    return math.radians(_number(value, path))


Reader = Callable[[Any, str], Any]

# Section key -> (attribute name, reader)
TRACK_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'straight_length_m': ('straight_length', _number),
    'inner_radius_m': ('inner_radius', _number),
    'lane_width_m': ('lane_width', _number),
    'num_lanes': ('num_lanes', _integer),
}
RUNNER_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'start_lane': ('start_lane', _integer),
    'start_station_m': ('start_station', _number),
    'speed_mps': ('speed', _number),
}
SENSOR_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'horizontal_fov_deg': ('horizontal_fov', _degrees),
    'max_range_m': ('max_range', _number),
    'lateral_noise_sigma_m': ('lateral_noise_sigma', _number),
    'obstacle_dropout_prob': ('obstacle_dropout_prob', _number),
    'occlusion_enabled': ('occlusion_enabled', _boolean),
}
LATTICE_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'horizon_m': ('horizon', _number),
    'row_spacing_m': ('row_spacing', _number),
    'lateral_count': ('lateral_count', _integer),
    'lateral_margin_m': ('lateral_margin', _number),
}
PLANNER_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'lookahead_m': ('lookahead', _number),
    'allow_lane_switch': ('allow_lane_switch', _boolean),
}
COST_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'k': ('k', _number),
    'd_safe_m': ('d_safe', _number),
    'terminal_weight_per_m': ('terminal_weight', _number),
}
GUIDANCE_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'forward_half_angle_deg': ('forward_half_angle', _degrees),
    'slight_turn_limit_deg': ('slight_turn_limit', _degrees),
}
TURN_RATE_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'slight_deg_per_s': ('slight', _degrees),
    'hard_deg_per_s': ('hard', _degrees),
}
LIMIT_FIELDS: Dict[str, Tuple[str, Reader]] = {
    'stop_timeout_s': ('stop_timeout', _number),
    'timeout_factor': ('timeout_factor', _number),
}

TOP_LEVEL_KEYS = (
    'name', 'kind', 'seed', 'goal_distance_m', 'planning_rate_hz', 'track', 'runner',
    'obstacles', 'sensor', 'planner', 'costs', 'guidance', 'turn_rates', 'limits',
)


def _check_keys(data: Any, allowed, path: str) -> Dict[str, Any]:
    if not isinstance(data, dict):
        raise ScenarioError("expected a mapping", path or None)
    for key in data:
        if key not in allowed:
            dotted = f"{path}.{key}" if path else str(key)
            raise ScenarioError("unknown field", dotted)
    return data


def _section(data: Dict[str, Any], name: str,
             fields: Dict[str, Tuple[str, Reader]], extra=()) -> Dict[str, Any]:
    """Read the known fields of one section into constructor kwargs."""
    section = _check_keys(data.get(name, {}), tuple(fields) + tuple(extra), name)
    return {
        attribute: reader(section[key], f"{name}.{key}")
        for key, (attribute, reader) in fields.items()
        if key in section
    }


def _build(factory, kwargs: Dict[str, Any], path: str):
    try:
        return factory(**kwargs)
    except GuidanceError as e:
        if isinstance(e, ScenarioError):
            raise
        raise ScenarioError(str(e), path) from e


def parse_obstacle(data: Any, layout: TrackLayout, path: str) -> Obstacle:
    """Obstacle from {x_m, y_m, radius_m} or {station_m, offset_m, lane, radius_m}."""
    entry = _check_keys(data, ('x_m', 'y_m', 'station_m', 'offset_m', 'lane', 'radius_m'), path)
    if 'radius_m' not in entry:
        raise ScenarioError("missing field", f"{path}.radius_m")
    radius = _number(entry['radius_m'], f"{path}.radius_m")

    world = 'x_m' in entry or 'y_m' in entry
    track = 'station_m' in entry or 'offset_m' in entry or 'lane' in entry
    if world == track:
        raise ScenarioError("give either x_m/y_m or station_m/offset_m", path)

    if world:
        for key in ('x_m', 'y_m'):
            if key not in entry:
                raise ScenarioError("missing field", f"{path}.{key}")
        position = (_number(entry['x_m'], f"{path}.x_m"), _number(entry['y_m'], f"{path}.y_m"))
    else:
        if 'station_m' not in entry:
            raise ScenarioError("missing field", f"{path}.station_m")
        lane = _integer(entry.get('lane', 1), f"{path}.lane")
        if not 1 <= lane <= layout.num_lanes:
            raise ScenarioError(f"must lie in 1..{layout.num_lanes}", f"{path}.lane")
        x, y, _ = layout_pose(layout,
                              _number(entry['station_m'], f"{path}.station_m"),
                              _number(entry.get('offset_m', 0.0), f"{path}.offset_m"),
                              lane)
        position = (x, y)

    return _build(Obstacle, {'position': position, 'radius': radius}, path)


def scenario_from_dict(data: Any) -> ScenarioSpec:
    """Build a ScenarioSpec from a parsed scenario document.

    Raises:
        ScenarioError: On unknown fields, wrong types or invalid values;
            the message names the dotted field path
    """
    data = _check_keys(data, TOP_LEVEL_KEYS, '')

    track_kwargs = _section(data, 'track', TRACK_FIELDS, extra=('points_per_arc',))
    layout = _build(TrackLayout, track_kwargs, 'track')
    points_per_arc = DEFAULT_POINTS_PER_ARC
    if 'points_per_arc' in data.get('track', {}):
        points_per_arc = _integer(data['track']['points_per_arc'], 'track.points_per_arc')
        if points_per_arc < 2:
            raise ScenarioError("must be at least 2", 'track.points_per_arc')

    obstacles_data = data.get('obstacles', [])
    if not isinstance(obstacles_data, list):
        raise ScenarioError("expected a list", 'obstacles')
    obstacles = tuple(parse_obstacle(entry, layout, f"obstacles[{i}]")
                      for i, entry in enumerate(obstacles_data))

    lattice = _build(LatticeConfig, _section(data, 'planner', LATTICE_FIELDS, extra=PLANNER_FIELDS), 'planner')
    planner_kwargs = _section(data, 'planner', PLANNER_FIELDS, extra=LATTICE_FIELDS)
    costs = _build(CostParams, _section(data, 'costs', COST_FIELDS), 'costs')
    if 'lookahead' in planner_kwargs and not planner_kwargs['lookahead'] > 0.0:
        raise ScenarioError("must be positive", 'planner.lookahead_m')
    planner = PlannerConfig(lattice=lattice, costs=costs, **planner_kwargs)

    kwargs: Dict[str, Any] = dict(
        layout=layout,
        points_per_arc=points_per_arc,
        obstacles=obstacles,
        sensor=_build(SensorConfig, _section(data, 'sensor', SENSOR_FIELDS), 'sensor'),
        planner=planner,
        sectors=_build(SectorConfig, _section(data, 'guidance', GUIDANCE_FIELDS), 'guidance'),
        turn_rates=_build(TurnRates, _section(data, 'turn_rates', TURN_RATE_FIELDS), 'turn_rates'),
    )
    kwargs.update(_section(data, 'runner', RUNNER_FIELDS))
    kwargs.update(_section(data, 'limits', LIMIT_FIELDS))
    if 'name' in data:
        kwargs['name'] = _string(data['name'], 'name')
    if 'kind' in data:
        kwargs['kind'] = _string(data['kind'], 'kind')
    if 'seed' in data:
        kwargs['seed'] = _integer(data['seed'], 'seed')
    if 'goal_distance_m' in data:
        kwargs['goal_distance'] = _number(data['goal_distance_m'], 'goal_distance_m')
    if 'planning_rate_hz' in data:
        kwargs['planning_rate'] = _number(data['planning_rate_hz'], 'planning_rate_hz')

    return ScenarioSpec(**kwargs)


def _write_fields(obj: Any, fields: Dict[str, Tuple[str, Reader]]) -> Dict[str, Any]:
    out = {}
    for key, (attribute, reader) in fields.items():
        value = getattr(obj, attribute)
        out[key] = math.degrees(value) if reader is _degrees else value
    return out


def scenario_to_dict(spec: ScenarioSpec) -> Dict[str, Any]:
    """Serialize a ScenarioSpec in the scenario file format (world-coordinate obstacles)."""
    track = _write_fields(spec.layout, TRACK_FIELDS)
    track['points_per_arc'] = spec.points_per_arc
    planner = _write_fields(spec.planner.lattice, LATTICE_FIELDS)
    planner.update(_write_fields(spec.planner, PLANNER_FIELDS))
    return {
        'name': spec.name,
        'kind': spec.kind,
        'seed': spec.seed,
        'goal_distance_m': spec.goal_distance,
        'planning_rate_hz': spec.planning_rate,
        'track': track,
        'runner': _write_fields(spec, RUNNER_FIELDS),
        'obstacles': [
            {'x_m': o.position[0], 'y_m': o.position[1], 'radius_m': o.radius}
            for o in spec.obstacles
        ],
        'sensor': _write_fields(spec.sensor, SENSOR_FIELDS),
        'planner': planner,
        'costs': _write_fields(spec.planner.costs, COST_FIELDS),
        'guidance': _write_fields(spec.sectors, GUIDANCE_FIELDS),
        'turn_rates': _write_fields(spec.turn_rates, TURN_RATE_FIELDS),
        'limits': _write_fields(spec, LIMIT_FIELDS),
    }


def read_scenario_file(path: Path, label: str = "scenario file") -> Dict[str, Any]:
    """Parse a JSON or YAML document into a plain dict.

    Raises:
        ScenarioError: If the file is missing or does not parse
    """
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"{label} not found: {path}")
    try:
        with open(path, 'r') as f:
            if path.suffix.lower() in ('.yaml', '.yml'):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ScenarioError(f"could not parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ScenarioError(f"{path} does not contain a mapping")
    return data


def load_scenario(path: Path) -> ScenarioSpec:
    return scenario_from_dict(read_scenario_file(path))


def apply_override(data: Dict[str, Any], key: str, value: Any) -> Dict[str, Any]:
    """Copy of a scenario document with one dotted key replaced."""
    updated = copy.deepcopy(data)
    parts = key.split('.')
    target = updated
    for part in parts[:-1]:
        section = target.setdefault(part, {})
        if not isinstance(section, dict):
            raise ScenarioError("is not a section", key)
        target = section
    target[parts[-1]] = value
    return updated


def parse_sweep(text: str) -> Tuple[str, List[float]]:
    """Expand KEY=START:STEP:END (inclusive end) into the key and its values."""
    key, sep, span = text.partition('=')
    parts = span.split(':')
    if not sep or not key or len(parts) != 3:
        raise ScenarioError(f"sweep must look like KEY=START:STEP:END, got {text!r}", 'sweep')
    try:
        start, step, end = (float(p) for p in parts)
    except ValueError:
        raise ScenarioError(f"sweep bounds must be numbers, got {span!r}", 'sweep') from None
    if step <= 0.0 or end < start:
        raise ScenarioError("sweep needs a positive step and END >= START", 'sweep')

    count = int(math.floor((end - start) / step + 1e-9)) + 1
    values = [round(start + i * step, 12) for i in range(count)]
    return key, values


# -----------------------------------------------------------------------------
# Single-frame files
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameSpec:
    """Runner pose, lane and obstacles for planning a single frame."""

    pose: Tuple[float, float, float]
    lane: int
    obstacles: Tuple[Obstacle, ...]
    timestamp: float = 0.0


POSE_TRACK_KEYS = ('station_m', 'offset_m', 'heading_offset_deg')
POSE_WORLD_KEYS = ('x_m', 'y_m', 'heading_deg')


def frame_from_dict(data: Optional[Dict[str, Any]], spec: ScenarioSpec) -> FrameSpec:
    """Build a FrameSpec; without data the runner stands at the scenario start.

    Obstacles default to the scenario's own when the frame gives none.
    """
    data = _check_keys(data or {}, ('pose', 'lane', 'obstacles', 'timestamp_s'), '')
    layout = spec.layout

    lane = _integer(data.get('lane', spec.start_lane), 'lane')
    if not 1 <= lane <= layout.num_lanes:
        raise ScenarioError(f"must lie in 1..{layout.num_lanes}", 'lane')

    pose_data = _check_keys(data.get('pose', {}), POSE_TRACK_KEYS + POSE_WORLD_KEYS, 'pose')
    if any(key in pose_data for key in POSE_WORLD_KEYS):
        if any(key in pose_data for key in POSE_TRACK_KEYS):
            raise ScenarioError("mixes world and track coordinates", 'pose')
        for key in POSE_WORLD_KEYS:
            if key not in pose_data:
                raise ScenarioError("missing field", f"pose.{key}")
        pose = (_number(pose_data['x_m'], 'pose.x_m'),
                _number(pose_data['y_m'], 'pose.y_m'),
                _degrees(pose_data['heading_deg'], 'pose.heading_deg'))
    else:
        station = _number(pose_data.get('station_m', spec.start_station), 'pose.station_m')
        offset = _number(pose_data.get('offset_m', 0.0), 'pose.offset_m')
        turn = _degrees(pose_data.get('heading_offset_deg', 0.0), 'pose.heading_offset_deg')
        x, y, heading = layout_pose(layout, station, offset, lane)
        pose = (x, y, heading + turn)

    if 'obstacles' in data:
        if not isinstance(data['obstacles'], list):
            raise ScenarioError("expected a list", 'obstacles')
        obstacles = tuple(parse_obstacle(entry, layout, f"obstacles[{i}]")
                          for i, entry in enumerate(data['obstacles']))
    else:
        obstacles = spec.obstacles

    timestamp = _number(data.get('timestamp_s', 0.0), 'timestamp_s')
    return FrameSpec(pose=pose, lane=lane, obstacles=obstacles, timestamp=timestamp)


def load_frame(path: Path, spec: ScenarioSpec) -> FrameSpec:
    return frame_from_dict(read_scenario_file(path, "frame file"), spec)
