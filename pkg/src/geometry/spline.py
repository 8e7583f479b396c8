"""Natural cubic splines over a strictly increasing knot vector."""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from errors import InvalidInputError, OutOfDomainError

# Parameters within this distance of the end knots are snapped onto the domain.
DOMAIN_TOLERANCE = 1e-9

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class Spline1D:
    """Piecewise cubic S_i(x) = a_i + b_i*x + c_i*x^2 + d_i*x^3.

    x is the local coordinate (t - knots[i]) of segment i.

    Attributes:
        knots: Ascending parameter values, shape (n,)
        segments: Coefficient rows (a_i, b_i, c_i, d_i), shape (n - 1, 4)
    """

    knots: np.ndarray
    segments: np.ndarray

    @property
    def t_min(self) -> float:
        return float(self.knots[0])

    @property
    def t_max(self) -> float:
        return float(self.knots[-1])

    def __call__(self, t: ArrayLike, order: int = 0) -> np.ndarray:
        """Evaluate the spline or one of its first two derivatives.

        No domain check is made here; parameters outside the knots are
        evaluated on the first or last segment. Use eval_spline for the
        checked scalar form.
        """
        t = np.asarray(t, dtype=float)
        index = np.clip(np.searchsorted(self.knots, t, side='right') - 1,
                        0, len(self.knots) - 2)
        x = t - self.knots[index]
        a, b, c, d = (self.segments[index, k] for k in range(4))

        if order == 0:
            return a + x * (b + x * (c + x * d))
        if order == 1:
            return b + x * (2.0 * c + 3.0 * d * x)
        if order == 2:
            return 2.0 * c + 6.0 * d * x
        raise InvalidInputError(f"derivative order must be 0, 1 or 2, got {order}")


def fit_natural_spline(knots: Sequence[float], values: Sequence[float]) -> Spline1D:
    """Fit the interpolating cubic spline with zero end curvature.

    Args:
        knots: Strictly increasing parameter values (at least two)
        values: Function values at the knots

    Returns:
        The fitted Spline1D

    Raises:
        InvalidInputError: On length mismatch, fewer than two knots or
            non-increasing knots
    """
    knots = np.asarray(knots, dtype=float)
    values = np.asarray(values, dtype=float)

    if knots.ndim != 1 or values.ndim != 1:
        raise InvalidInputError("knots and values must be one-dimensional")
    if len(knots) != len(values):
        raise InvalidInputError(
            f"knots and values differ in length ({len(knots)} != {len(values)})")
    if len(knots) < 2:
        raise InvalidInputError("at least two knots are required")
    if not np.all(np.isfinite(knots)) or not np.all(np.isfinite(values)):
        raise InvalidInputError("knots and values must be finite")
    if np.any(np.diff(knots) <= 0.0):
        raise InvalidInputError("knots must be strictly increasing")

    # scipy stores descending powers per column; flip to (a, b, c, d) rows.
    solved = CubicSpline(knots, values, bc_type='natural')
    segments = np.ascontiguousarray(solved.c[::-1].T)

    knots = knots.copy()
    knots.setflags(write=False)
    segments.setflags(write=False)
    return Spline1D(knots=knots, segments=segments)


def eval_spline(spline: Spline1D, t: float, order: int = 0) -> float:
    """Evaluate S(t), S'(t) or S''(t) inside the knot range.

    Raises:
        OutOfDomainError: If t lies outside [first knot, last knot]
        InvalidInputError: If order is not 0, 1 or 2
    """
    if order not in (0, 1, 2):
        raise InvalidInputError(f"derivative order must be 0, 1 or 2, got {order}")
    t = float(t)
    if not (spline.t_min - DOMAIN_TOLERANCE <= t <= spline.t_max + DOMAIN_TOLERANCE):
        raise OutOfDomainError(
            f"t={t} outside spline domain [{spline.t_min}, {spline.t_max}]")
    t = min(max(t, spline.t_min), spline.t_max)
    return float(spline(t, order))
