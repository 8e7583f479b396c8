"""Cubic-spline curves and Frenet-frame transforms."""

from .spline import Spline1D, fit_natural_spline, eval_spline
from .curve import (
    Curve2D,
    FrenetPoint,
    build_curve,
    cartesian_to_frenet,
    curvature_at,
    frenet_to_cartesian,
    yaw_at,
)

__all__ = [
    'Spline1D', 'fit_natural_spline', 'eval_spline',
    'Curve2D', 'FrenetPoint', 'build_curve', 'cartesian_to_frenet',
    'curvature_at', 'frenet_to_cartesian', 'yaw_at',
]
