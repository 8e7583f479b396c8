"""Reference line and corridor width from the two perceived boundaries."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from errors import InsufficientPerceptionError, InvalidInputError
from geometry.curve import Curve2D, build_curve
from perception.sensor import Observation

MIN_MIDPOINT_SPACING = 0.4
HEADING_BASELINE = 1.5
WIDEN_SIDES = (None, 'left', 'right')


@dataclass(frozen=True, eq=False)
class Corridor:
    """Midline of the drivable band and its half-width profile.

    Attributes:
        reference: Midline curve in body coordinates
        stations: Arc stations of the midline knots
        half_widths: Half the boundary separation at each knot
    """

    reference: Curve2D
    stations: np.ndarray
    half_widths: np.ndarray

    def half_width_at(self, s):
        """Half-width at arc length s, linearly interpolated between knots."""
        values = np.interp(s, self.stations, self.half_widths)
        return float(values) if np.ndim(values) == 0 else values


def project_onto_polyline(points: np.ndarray,
                          polyline: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Nearest points of an open polyline.

    Returns:
        (feet, stations along the polyline, distances, mask of feet that
        are not clamped to either end of the polyline)
    """
    starts, ends = polyline[:-1], polyline[1:]
    edges = ends - starts
    lengths2 = np.einsum('ij,ij->i', edges, edges)
    keep = lengths2 > 0.0
    starts, edges, lengths2 = starts[keep], edges[keep], lengths2[keep]

    rel = points[:, np.newaxis, :] - starts[np.newaxis]
    raw = np.einsum('kmj,mj->km', rel, edges) / lengths2
    along = np.clip(raw, 0.0, 1.0)
    feet = starts + along[..., np.newaxis] * edges
    distances = np.linalg.norm(points[:, np.newaxis, :] - feet, axis=-1)

    rows = np.arange(len(points))
    best = np.argmin(distances, axis=1)
    last = len(edges) - 1
    interior = ~(((best == 0) & (raw[rows, best] < 0.0)) |
                 ((best == last) & (raw[rows, best] > 1.0)))

    edge_lengths = np.sqrt(lengths2)
    cumulative = np.concatenate([[0.0], np.cumsum(edge_lengths)])
    stations = cumulative[best] + along[rows, best] * edge_lengths[best]
    return feet[rows, best], stations, distances[rows, best], interior


def _polyline_stations(polyline: np.ndarray) -> np.ndarray:
    return np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(polyline, axis=0).T))])


def _pick_boundaries(obs: Observation, widen: Optional[str]) -> Tuple[np.ndarray, np.ndarray]:
    if widen not in WIDEN_SIDES:
        raise InvalidInputError(f"widen must be one of {WIDEN_SIDES}, got {widen!r}")
    left = obs.left_lane_boundary if widen == 'left' else obs.left_boundary
    right = obs.right_lane_boundary if widen == 'right' else obs.right_boundary
    return np.asarray(left, dtype=float).reshape(-1, 2), np.asarray(right, dtype=float).reshape(-1, 2)


def reference_from_observation(obs: Observation, widen: Optional[str] = None) -> Corridor:
    """Build the midline corridor from the perceived boundaries.

    Every boundary point is paired with its nearest point on the opposite
    polyline; the midpoints, ordered by station along the left boundary,
    become the midline knots and half their separation the half-width.
    The foot of the runner's position is prepended so the midline starts
    beside the runner.

    Args:
        obs: Perception frame
        widen: None for the current lane, 'right' or 'left' to span the
            adjacent lane on that side as well

    Raises:
        InsufficientPerceptionError: If either boundary has fewer than two
            points or the boundaries do not overlap
    """
    left, right = _pick_boundaries(obs, widen)
    if len(left) < 2 or len(right) < 2:
        raise InsufficientPerceptionError(
            f"need two points per boundary, got {len(left)} left and {len(right)} right")

    left_stations = _polyline_stations(left)
    feet, _, gaps, ok = project_onto_polyline(left, right)
    mids = [(left + feet)[ok] / 2.0]
    halves = [gaps[ok] / 2.0]
    keys = [left_stations[ok]]

    feet, stations, gaps, ok = project_onto_polyline(right, left)
    mids.append((right + feet)[ok] / 2.0)
    halves.append(gaps[ok] / 2.0)
    keys.append(stations[ok])

    mids = np.concatenate(mids)
    halves = np.concatenate(halves)
    order = np.argsort(np.concatenate(keys), kind='stable')

    knots, widths = [], []
    for index in order:
        if knots and np.hypot(*(mids[index] - knots[-1])) < MIN_MIDPOINT_SPACING:
            continue
        knots.append(mids[index])
        widths.append(halves[index])
    if len(knots) < 2:
        raise InsufficientPerceptionError("boundaries do not overlap")

    knots = np.array(knots)
    widths = np.array(widths)

    # Start the midline beside the runner: extend the first knots with a
    # quadratic fitted in their own frame.
    spread = np.hypot(*(knots - knots[0]).T)
    ahead = np.flatnonzero(spread >= HEADING_BASELINE)
    far = knots[ahead[0]] if len(ahead) else knots[-1]
    direction = (far - knots[0]) / np.linalg.norm(far - knots[0])
    normal = np.array([-direction[1], direction[0]])
    back = float(-knots[0] @ direction)
    if back < -MIN_MIDPOINT_SPACING / 2.0:
        near = knots[spread <= 2.0 * HEADING_BASELINE] - knots[0]
        coeffs = np.polyfit(near @ direction, near @ normal, 2 if len(near) >= 3 else 1)
        start = knots[0] + back * direction + np.polyval(coeffs, back) * normal
        knots = np.vstack([start, knots])
        widths = np.concatenate([[widths[0]], widths])

    reference = build_curve(knots)
    stations = np.array(reference.knot_stations)
    widths.setflags(write=False)
    return Corridor(reference=reference, stations=stations, half_widths=widths)
