"""Stadium-shaped athletics track geometry.

Laps run counter-clockwise, so the inner kerb is on the runner's left.
Arc station 0 is the middle of the home straight (y < 0, heading +x).
Lane 1 is innermost; its centerline radius on the bends is inner_radius,
and every further lane adds one lane width.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from errors import InvalidInputError
from geometry.curve import Curve2D, build_curve

BOUNDARY_SPACING = 0.5
MIN_LANE_WIDTH = 0.9


@dataclass(frozen=True)
class TrackLayout:
    """Track dimensions in meters.

    Attributes:
        straight_length: Length of each straight (0 gives a ring)
        inner_radius: Lane-1 centerline radius on the bends
        lane_width: Width of every lane
        num_lanes: Number of lanes
    """

    straight_length: float = 84.39
    inner_radius: float = 36.80
    lane_width: float = 1.22
    num_lanes: int = 8

    def __post_init__(self):
        if not math.isfinite(self.straight_length) or self.straight_length < 0.0:
            raise InvalidInputError("straight_length must be non-negative")
        if not math.isfinite(self.inner_radius) or self.inner_radius <= 0.0:
            raise InvalidInputError("inner_radius must be positive")
        if not math.isfinite(self.lane_width) or self.lane_width < MIN_LANE_WIDTH:
            raise InvalidInputError(f"lane_width must be at least {MIN_LANE_WIDTH} m")
        if int(self.num_lanes) != self.num_lanes or self.num_lanes < 1:
            raise InvalidInputError("num_lanes must be a positive integer")
        if self.inner_radius <= self.lane_width / 2.0:
            raise InvalidInputError("inner_radius must exceed half a lane width")

    def lane_radius(self, lane: int) -> float:
        """Centerline radius of a lane on the bends."""
        return self.inner_radius + (lane - 1) * self.lane_width

    def lane_length(self, lane: int) -> float:
        """Analytic centerline length of a lane."""
        return stadium_length(self.lane_radius(lane), self.straight_length)


def stadium_length(radius: float, straight: float) -> float:
    return 2.0 * straight + 2.0 * math.pi * radius


def _segment_breaks(radius: float, straight: float) -> Tuple[float, ...]:
    half = straight / 2.0
    bend = math.pi * radius
    return (0.0, half, half + bend, half + bend + straight,
            half + 2.0 * bend + straight, stadium_length(radius, straight))


def stadium_pose(station, radius: float, straight: float):
    """Point and heading on a stadium loop at the given arc station(s).

    Returns:
        Tuple of (points with shape (..., 2), headings in (-pi, pi])
    """
    station = np.asarray(station, dtype=float)
    shape = station.shape
    half = straight / 2.0
    breaks = _segment_breaks(radius, straight)
    sigma = np.mod(station.ravel(), breaks[-1])

    x = np.empty_like(sigma)
    y = np.empty_like(sigma)
    heading = np.empty_like(sigma)

    home_right = sigma < breaks[1]
    right_bend = (sigma >= breaks[1]) & (sigma < breaks[2])
    back = (sigma >= breaks[2]) & (sigma < breaks[3])
    left_bend = (sigma >= breaks[3]) & (sigma < breaks[4])
    home_left = sigma >= breaks[4]

    x[home_right] = sigma[home_right]
    y[home_right] = -radius
    heading[home_right] = 0.0

    theta = -math.pi / 2.0 + (sigma[right_bend] - breaks[1]) / radius
    x[right_bend] = half + radius * np.cos(theta)
    y[right_bend] = radius * np.sin(theta)
    heading[right_bend] = theta + math.pi / 2.0

    x[back] = half - (sigma[back] - breaks[2])
    y[back] = radius
    heading[back] = math.pi

    theta = math.pi / 2.0 + (sigma[left_bend] - breaks[3]) / radius
    x[left_bend] = -half + radius * np.cos(theta)
    y[left_bend] = radius * np.sin(theta)
    heading[left_bend] = theta + math.pi / 2.0

    x[home_left] = -half + (sigma[home_left] - breaks[4])
    y[home_left] = -radius
    heading[home_left] = 0.0

    heading = np.mod(heading + math.pi, 2.0 * math.pi) - math.pi
    heading = np.where(heading <= -math.pi, heading + 2.0 * math.pi, heading)
    return np.stack([x, y], axis=-1).reshape(shape + (2,)), heading.reshape(shape)


def stadium_station(q: Sequence[float], radius: float, straight: float) -> float:
    """Arc station of the point of a stadium loop nearest to q."""
    x, y = float(q[0]), float(q[1])
    half = straight / 2.0
    breaks = _segment_breaks(radius, straight)
    if x > half:
        theta = math.atan2(y, x - half)
        return breaks[1] + radius * (theta + math.pi / 2.0)
    if x < -half:
        theta = math.atan2(y, x + half)
        return breaks[3] + radius * ((theta - math.pi / 2.0) % (2.0 * math.pi))
    if y < 0.0:
        return x % breaks[-1]
    return breaks[2] + (half - x)


def layout_pose(layout: TrackLayout, station: float, offset: float = 0.0,
                lane: int = 1) -> Tuple[float, float, float]:
    """(x, y, heading) at a lane station, offset meters left of the centerline."""
    if not 1 <= lane <= layout.num_lanes:
        raise InvalidInputError(f"lane {lane} outside 1..{layout.num_lanes}")
    point, heading = stadium_pose(float(station), layout.lane_radius(lane),
                                  layout.straight_length)
    heading = float(heading)
    x = float(point[0]) - offset * math.sin(heading)
    y = float(point[1]) + offset * math.cos(heading)
    return x, y, heading


def spine_distance(q: Sequence[float], straight: float) -> float:
    """Distance from q to the segment joining the two bend centers."""
    return math.hypot(max(abs(float(q[0])) - straight / 2.0, 0.0), float(q[1]))


def _station_grid(radius: float, straight: float, bend_segments: Optional[int]) -> np.ndarray:
    breaks = _segment_breaks(radius, straight)
    pieces = []
    for index, (start, end) in enumerate(zip(breaks[:-1], breaks[1:])):
        if end <= start:
            continue
        count = math.ceil((end - start) / BOUNDARY_SPACING)
        if bend_segments is not None and index in (1, 3):
            count = max(count, bend_segments)
        pieces.append(np.linspace(start, end, count + 1)[:-1])
    pieces.append(np.array([breaks[-1]]))
    return np.concatenate(pieces)


@dataclass(frozen=True, eq=False)
class TrackModel:
    """Generated track: per-lane centerlines and boundary polylines.

    Centerline and boundary point arrays are closed loops whose last point
    repeats the first. Lane indices are 1-based.
    """

    layout: TrackLayout
    centerlines: Tuple[Curve2D, ...]
    centerline_points: Tuple[np.ndarray, ...]
    boundaries: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    def _check_lane(self, lane: int) -> int:
        if not 1 <= lane <= self.layout.num_lanes:
            raise InvalidInputError(
                f"lane {lane} outside 1..{self.layout.num_lanes}")
        return lane

    def centerline(self, lane: int) -> Curve2D:
        return self.centerlines[self._check_lane(lane) - 1]

    def left_boundary(self, lane: int) -> np.ndarray:
        return self.boundaries[self._check_lane(lane) - 1][0]

    def right_boundary(self, lane: int) -> np.ndarray:
        return self.boundaries[self._check_lane(lane) - 1][1]

    def pose_at(self, station: float, offset: float = 0.0,
                lane: int = 1) -> Tuple[float, float, float]:
        """World pose at a lane station, displaced offset meters to the left."""
        return layout_pose(self.layout, station, offset, self._check_lane(lane))

    def station(self, q: Sequence[float], lane: int = 1) -> float:
        radius = self.layout.lane_radius(self._check_lane(lane))
        return stadium_station(q, radius, self.layout.straight_length)

    def lateral_offset(self, q: Sequence[float], lane: int = 1) -> float:
        """Signed offset from a lane centerline, positive toward the infield."""
        radius = self.layout.lane_radius(self._check_lane(lane))
        return radius - spine_distance(q, self.layout.straight_length)


def generate_track(layout: TrackLayout, points_per_arc: int = 360) -> TrackModel:
    """Build centerlines and lane boundaries for every lane.

    Args:
        layout: Track dimensions
        points_per_arc: Minimum centerline samples per bend

    Returns:
        The generated TrackModel
    """
    if int(points_per_arc) < 2:
        raise InvalidInputError("points_per_arc must be at least 2")

    straight = layout.straight_length
    half_width = layout.lane_width / 2.0
    centerlines = []
    centerline_points = []
    boundaries = []

    for lane in range(1, layout.num_lanes + 1):
        radius = layout.lane_radius(lane)

        points, _ = stadium_pose(_station_grid(radius, straight, int(points_per_arc)),
                                 radius, straight)
        centerline_points.append(points)
        centerlines.append(build_curve(points))

        inner = radius - half_width
        outer = radius + half_width
        left, _ = stadium_pose(_station_grid(inner, straight, None), inner, straight)
        right, _ = stadium_pose(_station_grid(outer, straight, None), outer, straight)
        boundaries.append((left, right))

    for array in centerline_points + [b for pair in boundaries for b in pair]:
        array.setflags(write=False)

    return TrackModel(
        layout=layout,
        centerlines=tuple(centerlines),
        centerline_points=tuple(centerline_points),
        boundaries=tuple(boundaries),
    )


def lane_at(track: TrackModel, q: Sequence[float]) -> Optional[int]:
    """Lane whose centerline is within half a lane width of q.

    Points exactly on a shared boundary belong to the inner lane.
    Returns None off the track.
    """
    layout = track.layout
    for lane in range(1, layout.num_lanes + 1):
        if abs(track.lateral_offset(q, lane)) <= layout.lane_width / 2.0 + 1e-12:
            return lane
    return None
