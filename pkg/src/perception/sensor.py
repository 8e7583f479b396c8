"""Synthetic perception: what the camera front-end hands to the planner.

Boundary polylines and obstacle detections are returned in the runner's
body frame (x forward, y left), clipped to the sensor's field-of-view
wedge and range.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from typing_extensions import TypeAlias

from errors import InvalidInputError
from track.layout import TrackModel

Pose: TypeAlias = Tuple[float, float, float]
Seed: TypeAlias = Union[int, Sequence[int]]


@dataclass(frozen=True)
class SensorConfig:
    """Field of view (radians), range (m), noise and dropout settings."""

    horizontal_fov: float = math.radians(69.0)
    max_range: float = 10.0
    lateral_noise_sigma: float = 0.03
    obstacle_dropout_prob: float = 0.0
    occlusion_enabled: bool = False

    def __post_init__(self):
        if not 0.0 < self.horizontal_fov < math.pi:
            raise InvalidInputError("horizontal_fov must lie in (0, pi)")
        if not self.max_range > 0.0:
            raise InvalidInputError("max_range must be positive")
        if not self.lateral_noise_sigma >= 0.0:
            raise InvalidInputError("lateral_noise_sigma must be non-negative")
        if not 0.0 <= self.obstacle_dropout_prob <= 1.0:
            raise InvalidInputError("obstacle_dropout_prob must lie in [0, 1]")


@dataclass(frozen=True)
class Obstacle:
    """Circular obstacle footprint."""

    position: Tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise InvalidInputError("obstacle radius must be positive")


def _empty_polyline() -> np.ndarray:
    return np.empty((0, 2))


@dataclass(frozen=True, eq=False)
class Observation:
    """One perception frame in body coordinates.

    left_boundary/right_boundary delimit the runner's lane. The
    *_lane_boundary polylines are the far lines of the adjacent lanes
    (empty when there is no such lane or it is not visible).
    """

    left_boundary: np.ndarray = field(default_factory=_empty_polyline)
    right_boundary: np.ndarray = field(default_factory=_empty_polyline)
    left_lane_boundary: np.ndarray = field(default_factory=_empty_polyline)
    right_lane_boundary: np.ndarray = field(default_factory=_empty_polyline)
    obstacles: Tuple[Obstacle, ...] = ()
    timestamp: float = 0.0


def to_body(points: np.ndarray, pose: Pose) -> np.ndarray:
    """World points to body frame (x forward, y left)."""
    x, y, heading = pose
    delta = np.asarray(points, dtype=float) - np.array([x, y])
    c, s = math.cos(heading), math.sin(heading)
    return np.stack([c * delta[..., 0] + s * delta[..., 1],
                     -s * delta[..., 0] + c * delta[..., 1]], axis=-1)


def to_world(points: np.ndarray, pose: Pose) -> np.ndarray:
    """Body-frame points back to world coordinates."""
    x, y, heading = pose
    points = np.asarray(points, dtype=float)
    c, s = math.cos(heading), math.sin(heading)
    return np.stack([x + c * points[..., 0] - s * points[..., 1],
                     y + s * points[..., 0] + c * points[..., 1]], axis=-1)


def in_view(points: np.ndarray, sensor: SensorConfig) -> np.ndarray:
    """Mask of body-frame points inside the FOV wedge and range."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    ranges = np.hypot(points[:, 0], points[:, 1])
    bearings = np.arctan2(points[:, 1], points[:, 0])
    return (ranges > 0.0) & (ranges <= sensor.max_range) & \
        (np.abs(bearings) <= sensor.horizontal_fov / 2.0)


def _visible_run(line: np.ndarray, pose: Pose, sensor: SensorConfig) -> np.ndarray:
    """Body-frame points of a closed polyline in view, ordered along the line."""
    loop = line[:-1] if len(line) > 1 and np.allclose(line[0], line[-1]) else line
    body = to_body(loop, pose)
    visible = np.flatnonzero(in_view(body, sensor))
    if len(visible) == 0:
        return _empty_polyline()

    # Order by index offset from the point nearest the runner so the seam
    # of the loop does not split the visible run.
    count = len(loop)
    anchor = int(np.argmin(np.hypot(body[:, 0], body[:, 1])))
    offsets = (visible - anchor) % count
    offsets = np.where(offsets > count // 2, offsets - count, offsets)
    return body[visible[np.argsort(offsets, kind='stable')]]


def _occluded(points: np.ndarray, obstacles: Sequence[Tuple[np.ndarray, float]]) -> np.ndarray:
    """Mask of points whose line of sight passes through a nearer obstacle."""
    mask = np.zeros(len(points), dtype=bool)
    if len(points) == 0:
        return mask
    distances = np.hypot(points[:, 0], points[:, 1])
    for center, radius in obstacles:
        along = np.clip(points @ center / np.maximum(distances ** 2, 1e-12), 0.0, 1.0)
        closest = np.linalg.norm(center - along[:, np.newaxis] * points, axis=1)
        nearer = np.linalg.norm(center) < distances
        mask |= nearer & (closest < radius)
    return mask


def observe(track: TrackModel, obstacles: Sequence[Obstacle], pose: Pose, lane: int,
            sensor: SensorConfig, seed: Seed = 0, timestamp: float = 0.0) -> Observation:
    """Produce the perception frame seen from a runner pose.

    Args:
        track: Track geometry
        obstacles: World obstacles
        pose: Runner (x, y, heading)
        lane: Runner's current lane
        sensor: Sensor settings
        seed: Seed for boundary noise and detection dropout
        timestamp: Frame time in seconds

    Returns:
        The Observation (possibly empty)
    """
    rng = np.random.default_rng(seed)
    num_lanes = track.layout.num_lanes

    lines = [
        track.left_boundary(lane),
        track.right_boundary(lane),
        track.left_boundary(lane - 1) if lane > 1 else None,
        track.right_boundary(lane + 1) if lane < num_lanes else None,
    ]

    body_obstacles = [(to_body(np.asarray(o.position), pose), o.radius) for o in obstacles]

    observed = []
    for line in lines:
        if line is None:
            observed.append(_empty_polyline())
            continue
        points = _visible_run(line, pose, sensor)
        noisy = points.copy()
        noisy[:, 1] += rng.normal(0.0, sensor.lateral_noise_sigma, size=len(points))
        keep = in_view(noisy, sensor)
        if sensor.occlusion_enabled:
            keep &= ~_occluded(noisy, body_obstacles)
        observed.append(noisy[keep])

    draws = rng.random(len(body_obstacles))
    detections = []
    for (center, radius), draw in zip(body_obstacles, draws):
        if not in_view(center, sensor)[0]:
            continue
        if draw < sensor.obstacle_dropout_prob:
            continue
        detections.append(Obstacle(position=(float(center[0]), float(center[1])),
                                   radius=radius))

    return Observation(
        left_boundary=observed[0],
        right_boundary=observed[1],
        left_lane_boundary=observed[2],
        right_lane_boundary=observed[3],
        obstacles=tuple(detections),
        timestamp=float(timestamp),
    )


def min_clearance(position: Sequence[float], obstacles: Sequence[Obstacle]) -> Optional[float]:
    """Smallest distance from a point to any obstacle footprint (None if no obstacles)."""
    if not obstacles:
        return None
    centers = np.array([o.position for o in obstacles], dtype=float)
    radii = np.array([o.radius for o in obstacles], dtype=float)
    gaps = np.hypot(centers[:, 0] - position[0], centers[:, 1] - position[1]) - radii
    return float(gaps.min())


def swept_clearance(start: Sequence[float], end: Sequence[float],
                    obstacles: Sequence[Obstacle]) -> Optional[float]:
    """Smallest distance from the segment start-end to any obstacle footprint (None if no obstacles)."""
    if not obstacles:
        return None
    a = np.asarray(start, dtype=float)
    step = np.asarray(end, dtype=float) - a
    centers = np.array([o.position for o in obstacles], dtype=float)
    radii = np.array([o.radius for o in obstacles], dtype=float)
    length2 = float(step @ step)
    if length2 > 0.0:
        u = np.clip((centers - a) @ step / length2, 0.0, 1.0)
    else:
        u = np.zeros(len(centers))
    nearest = a + u[:, np.newaxis] * step
    gaps = np.hypot(centers[:, 0] - nearest[:, 0], centers[:, 1] - nearest[:, 1]) - radii
    return float(gaps.min())
