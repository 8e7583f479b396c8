"""Synthetic perception frames and the corridor built from them."""

from .sensor import (
    Observation,
    Obstacle,
    SensorConfig,
    in_view,
    min_clearance,
    observe,
    swept_clearance,
    to_body,
    to_world,
)
from .reference import Corridor, project_onto_polyline, reference_from_observation

__all__ = [
    'Observation', 'Obstacle', 'SensorConfig', 'in_view', 'min_clearance',
    'observe', 'swept_clearance', 'to_body', 'to_world',
    'Corridor', 'project_onto_polyline', 'reference_from_observation',
]
