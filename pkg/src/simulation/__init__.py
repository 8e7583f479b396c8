"""Closed-loop episode simulation: runner model, scenarios, metrics and output files."""

from .runner import RunnerState, TurnRates, step_runner, wrap_angle
from .scenario import (
    FrameSpec,
    ScenarioSpec,
    apply_override,
    frame_from_dict,
    load_frame,
    load_scenario,
    parse_sweep,
    read_scenario_file,
    scenario_from_dict,
    scenario_to_dict,
)
from .trace import EpisodeStatus, EpisodeTrace, FrameRecord
from .metrics import Metrics, compute_metrics
from .episode import run_episode
from .export import EpisodeWriter, read_metrics, read_observations, read_trace, read_trajectory

__all__ = [
    'RunnerState', 'TurnRates', 'step_runner', 'wrap_angle',
    'FrameSpec', 'ScenarioSpec', 'apply_override', 'frame_from_dict', 'load_frame',
    'load_scenario', 'parse_sweep', 'read_scenario_file', 'scenario_from_dict', 'scenario_to_dict',
    'EpisodeStatus', 'EpisodeTrace', 'FrameRecord',
    'Metrics', 'compute_metrics',
    'run_episode',
    'EpisodeWriter', 'read_metrics', 'read_observations', 'read_trace', 'read_trajectory',
]
