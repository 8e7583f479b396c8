"""Arc-length parameterized planar curves and Frenet/Cartesian conversion.

A Curve2D is two natural splines x(t), y(t) fitted against the cumulative
chord length of the input points. Arc length is tabulated by composite
Simpson integration of |S'(t)| and inverted by table lookup plus one
Newton step. Frenet coordinates use d > 0 to the left of travel.
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from errors import AmbiguousProjectionError, InvalidInputError, OutOfDomainError
from geometry.spline import Spline1D, fit_natural_spline

DEFAULT_SAMPLES_PER_SEGMENT = 16

STATION_TOLERANCE = 1e-9
MIN_POINT_SPACING = 1e-9
# Headings this close above -pi are reported as +pi
YAW_WRAP_TOLERANCE = 1e-5

# Projection search
MAX_PROJECTION_CANDIDATES = 8
MAX_NEWTON_ITERATIONS = 20
NEWTON_TOLERANCE = 1e-9
AMBIGUITY_TOLERANCE = 1e-7
FOOT_SEPARATION = 1e-6
FAN_TOLERANCE = 1e-6

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class FrenetPoint:
    """Curve-relative coordinates: arc length s and signed lateral offset d."""

    s: float
    d: float


@dataclass(frozen=True, eq=False)
class Curve2D:
    """Planar curve S(t) = (x(t), y(t)) with an arc-length lookup table.

    Attributes:
        x_spline: x(t)
        y_spline: y(t)
        arc_table: Rows (t, s), strictly increasing in both columns
        table_points: Curve positions at the arc_table parameters
        total_length: Arc length of the whole curve in meters
        samples_per_segment: Simpson panels per spline segment
    """

    x_spline: Spline1D
    y_spline: Spline1D
    arc_table: np.ndarray
    table_points: np.ndarray
    total_length: float
    samples_per_segment: int

    @property
    def t_min(self) -> float:
        return self.x_spline.t_min

    @property
    def t_max(self) -> float:
        return self.x_spline.t_max

    @property
    def knot_stations(self) -> np.ndarray:
        """Arc length at every input point."""
        return self.arc_table[::self.samples_per_segment, 1]

    def position(self, t: ArrayLike) -> np.ndarray:
        return np.stack([self.x_spline(t), self.y_spline(t)], axis=-1)

    def derivative(self, t: ArrayLike, order: int = 1) -> np.ndarray:
        return np.stack([self.x_spline(t, order), self.y_spline(t, order)], axis=-1)

    def speed(self, t: ArrayLike) -> np.ndarray:
        return np.hypot(self.x_spline(t, 1), self.y_spline(t, 1))

    def s_of_t(self, t: ArrayLike) -> np.ndarray:
        """Arc length from the curve start to parameter t."""
        t = np.asarray(t, dtype=float)
        table_t = self.arc_table[:, 0]
        table_s = self.arc_table[:, 1]
        j = np.clip(np.searchsorted(table_t, t, side='right') - 1, 0, len(table_t) - 2)
        return table_s[j] + _simpson(self, table_t[j], t)

    def t_of_s(self, s: ArrayLike) -> np.ndarray:
        """Parameter at arc length s: binary search, interpolation, one Newton step."""
        s = np.asarray(s, dtype=float)
        table_t = self.arc_table[:, 0]
        table_s = self.arc_table[:, 1]
        j = np.clip(np.searchsorted(table_s, s, side='right') - 1, 0, len(table_s) - 2)
        fraction = (s - table_s[j]) / (table_s[j + 1] - table_s[j])
        t = table_t[j] + fraction * (table_t[j + 1] - table_t[j])
        t = t - (self.s_of_t(t) - s) / self.speed(t)
        return np.clip(t, self.t_min, self.t_max)

    def to_cartesian(self, s: ArrayLike, d: ArrayLike = 0.0) -> np.ndarray:
        """Vectorized Frenet to Cartesian conversion.

        Raises:
            OutOfDomainError: If any station lies outside [0, total_length]
        """
        s = _check_station(self, s)
        t = self.t_of_s(s)
        base = self.position(t)
        tangent = self.derivative(t, 1)
        tangent = tangent / np.linalg.norm(tangent, axis=-1, keepdims=True)
        normal = np.stack([-tangent[..., 1], tangent[..., 0]], axis=-1)
        return base + np.asarray(d, dtype=float)[..., np.newaxis] * normal

    def yaw(self, s: ArrayLike) -> np.ndarray:
        """Vectorized tangent heading atan2(y', x') at arc length s."""
        t = self.t_of_s(_check_station(self, s))
        yaw = np.arctan2(self.y_spline(t, 1), self.x_spline(t, 1))
        return np.where(yaw <= -math.pi + YAW_WRAP_TOLERANCE, math.pi, yaw)


def _simpson(curve: Curve2D, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Single-panel Simpson integral of |S'| over [a, b]."""
    midpoint = 0.5 * (a + b)
    return (b - a) / 6.0 * (curve.speed(a) + 4.0 * curve.speed(midpoint) + curve.speed(b))


def _check_station(curve: Curve2D, s: ArrayLike) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(s)) or np.any(s < -STATION_TOLERANCE) or \
            np.any(s > curve.total_length + STATION_TOLERANCE):
        raise OutOfDomainError(
            f"arc length outside [0, {curve.total_length:.6f}]: {s}")
    return np.clip(s, 0.0, curve.total_length)


def build_curve(points: Sequence[Sequence[float]],
                samples_per_segment: int = DEFAULT_SAMPLES_PER_SEGMENT) -> Curve2D:
    """Fit x(t), y(t) through the points and tabulate arc length.

    Args:
        points: At least two 2D points, no two consecutive ones coincident
        samples_per_segment: Simpson panels per spline segment

    Returns:
        The fitted Curve2D

    Raises:
        InvalidInputError: On malformed input, too few points or repeated
            consecutive points
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidInputError(f"points must have shape (n, 2), got {pts.shape}")
    if len(pts) < 2:
        raise InvalidInputError("at least two points are required")
    if not np.all(np.isfinite(pts)):
        raise InvalidInputError("points must be finite")
    if int(samples_per_segment) < 1:
        raise InvalidInputError("samples_per_segment must be positive")
    samples_per_segment = int(samples_per_segment)

    chords = np.hypot(*np.diff(pts, axis=0).T)
    if np.any(chords <= MIN_POINT_SPACING):
        raise InvalidInputError("consecutive points must not coincide")

    knots = np.concatenate([[0.0], np.cumsum(chords)])
    x_spline = fit_natural_spline(knots, pts[:, 0])
    y_spline = fit_natural_spline(knots, pts[:, 1])

    fractions = np.arange(samples_per_segment) / samples_per_segment
    table_t = (knots[:-1, np.newaxis] + chords[:, np.newaxis] * fractions).ravel()
    table_t = np.append(table_t, knots[-1])

    a, b = table_t[:-1], table_t[1:]

    def speed(t):
        return np.hypot(x_spline(t, 1), y_spline(t, 1))

    panels = (b - a) / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + b)) + speed(b))
    table_s = np.concatenate([[0.0], np.cumsum(panels)])
    if np.any(np.diff(table_s) <= 0.0):
        raise InvalidInputError("curve has a stationary point")

    arc_table = np.column_stack([table_t, table_s])
    table_points = np.column_stack([x_spline(table_t), y_spline(table_t)])
    arc_table.setflags(write=False)
    table_points.setflags(write=False)

    return Curve2D(
        x_spline=x_spline,
        y_spline=y_spline,
        arc_table=arc_table,
        table_points=table_points,
        total_length=float(table_s[-1]),
        samples_per_segment=samples_per_segment,
    )


def yaw_at(curve: Curve2D, s: float) -> float:
    """Heading of the tangent at arc length s, in (-pi, pi].

    Raises:
        OutOfDomainError: If s is outside [0, total_length]
    """
    return float(curve.yaw(float(s)))


def curvature_at(curve: Curve2D, s: float) -> float:
    """Signed curvature at arc length s (positive for left turns)."""
    t = curve.t_of_s(_check_station(curve, float(s)))
    dx, dy = curve.x_spline(t, 1), curve.y_spline(t, 1)
    ddx, ddy = curve.x_spline(t, 2), curve.y_spline(t, 2)
    return float((dx * ddy - dy * ddx) / (dx * dx + dy * dy) ** 1.5)


def frenet_to_cartesian(curve: Curve2D, p: FrenetPoint) -> np.ndarray:
    """Point at arc length p.s displaced p.d along the left normal.

    Raises:
        OutOfDomainError: If p.s is outside [0, total_length]
    """
    return curve.to_cartesian(float(p.s), float(p.d))


def cartesian_to_frenet(curve: Curve2D, q: Sequence[float]) -> FrenetPoint:
    """Project q onto the curve.

    A coarse scan over the arc table picks candidate local minima of the
    distance, each refined by Newton iterations on (S(t) - q) . S'(t).

    Raises:
        AmbiguousProjectionError: If two distinct foot points are equally near
        OutOfDomainError: If q lies beyond the normal fan of either end
    """
    q = np.asarray(q, dtype=float).reshape(2)
    delta = curve.table_points - q
    dist2 = np.einsum('ij,ij->i', delta, delta)

    before = np.concatenate([[np.inf], dist2[:-1]])
    after = np.concatenate([dist2[1:], [np.inf]])
    candidates = np.flatnonzero((dist2 <= before) & (dist2 <= after))
    candidates = candidates[np.argsort(dist2[candidates], kind='stable')]
    candidates = candidates[:MAX_PROJECTION_CANDIDATES]

    refined: List[Tuple[float, float, np.ndarray]] = []
    for index in candidates:
        t = _refine_projection(curve, q, float(curve.arc_table[index, 0]))
        foot = curve.position(t)
        refined.append((float(np.linalg.norm(q - foot)), t, foot))

    refined.sort(key=lambda item: item[0])
    best_distance, best_t, best_foot = refined[0]
    for distance, _, foot in refined[1:]:
        if distance - best_distance > AMBIGUITY_TOLERANCE:
            break
        if np.linalg.norm(foot - best_foot) > FOOT_SEPARATION:
            raise AmbiguousProjectionError(
                f"point {q.tolist()} is equidistant from several curve points")

    tangent = curve.derivative(best_t, 1)
    tangent = tangent / np.linalg.norm(tangent)
    offset = q - best_foot
    along = float(offset @ tangent)
    if best_t <= curve.t_min and along < -FAN_TOLERANCE:
        raise OutOfDomainError(f"point {q.tolist()} lies before the curve start")
    if best_t >= curve.t_max and along > FAN_TOLERANCE:
        raise OutOfDomainError(f"point {q.tolist()} lies beyond the curve end")

    s = min(max(float(curve.s_of_t(best_t)), 0.0), curve.total_length)
    d = float(tangent[0] * offset[1] - tangent[1] * offset[0])
    return FrenetPoint(s=s, d=d)


def _refine_projection(curve: Curve2D, q: np.ndarray, t: float) -> float:
    for _ in range(MAX_NEWTON_ITERATIONS):
        residual = curve.position(t) - q
        velocity = curve.derivative(t, 1)
        gradient = float(residual @ velocity)
        hessian = float(velocity @ velocity + residual @ curve.derivative(t, 2))
        if hessian <= 0.0:
            hessian = float(velocity @ velocity)
        t_next = min(max(t - gradient / hessian, curve.t_min), curve.t_max)
        converged = abs(t_next - t) < NEWTON_TOLERANCE
        t = t_next
        if converged:
            break
    return t
