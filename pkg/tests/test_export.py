"""Tests for episode output files and their readers."""

import json
import math

import pytest
import numpy as np
from pathlib import Path

import sys
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from perception.sensor import Observation, Obstacle
from simulation.episode import run_episode
from simulation.export import (
    METRICS_FILE,
    OBSERVATIONS_FILE,
    PLANS_FILE,
    SCENARIO_FILE,
    TRACE_FILE,
    TRAJECTORY_FILE,
    EpisodeWriter,
    dumps,
    observation_from_dict,
    observation_to_dict,
    read_jsonl,
    read_metrics,
    read_observations,
    read_trace,
    read_trajectory,
    to_jsonable,
)
from simulation.scenario import load_scenario, scenario_from_dict


@pytest.fixture(scope='module')
def short_spec():
    return scenario_from_dict({
        'name': 'short',
        'goal_distance_m': 3.0,
        'obstacles': [{'station_m': 8.0, 'offset_m': 0.5, 'lane': 1, 'radius_m': 0.05}],
        'sensor': {'lateral_noise_sigma_m': 0.0},
    })


@pytest.fixture
def written(tmp_path, short_spec):
    out_dir = tmp_path / 'short'
    with EpisodeWriter(out_dir, dump_observations=True, dump_plans=True) as writer:
        trace, metrics = run_episode(short_spec, on_frame=writer.on_frame)
        paths = writer.finish(trace, metrics, short_spec)
    return out_dir, trace, metrics, paths


# =============================================================================
# TESTS FOR JSON conversion
# =============================================================================

class TestJsonable:
    """numpy and non-finite values in JSON output."""

    def test_numpy_values(self):
        data = {'a': np.float64(1.5), 'b': np.arange(3), 'c': (np.int64(2), np.bool_(True))}
        assert to_jsonable(data) == {'a': 1.5, 'b': [0, 1, 2], 'c': [2, True]}

    def test_non_finite_becomes_null(self):
        assert json.loads(dumps({'value': math.inf, 'other': [np.nan, 1.0]})) == \
            {'value': None, 'other': [None, 1.0]}

    def test_observation_round_trip(self):
        obs = Observation(left_boundary=np.array([[1.0, 0.6], [2.0, 0.6]]),
                          obstacles=(Obstacle(position=(4.0, 0.1), radius=0.3),),
                          timestamp=0.7)
        back = observation_from_dict(json.loads(dumps(observation_to_dict(obs))))
        assert np.array_equal(back.left_boundary, obs.left_boundary)
        assert back.right_boundary.shape == (0, 2)
        assert back.obstacles == obs.obstacles
        assert back.timestamp == 0.7


# =============================================================================
# TESTS FOR EpisodeWriter
# =============================================================================

class TestEpisodeWriter:
    """Files of one episode directory."""

    def test_files_written(self, written):
        out_dir, _, _, paths = written
        names = {p.name for p in paths}
        assert names == {TRACE_FILE, METRICS_FILE, TRAJECTORY_FILE, SCENARIO_FILE,
                         OBSERVATIONS_FILE, PLANS_FILE}
        assert all((out_dir / name).exists() for name in names)

    def test_trace_round_trip(self, written):
        out_dir, trace, _, _ = written
        assert read_trace(out_dir / TRACE_FILE) == trace.frames

    def test_trace_lines_carry_required_fields(self, written):
        out_dir, _, _, _ = written
        for entry in read_jsonl(out_dir / TRACE_FILE):
            assert {'t', 'x', 'y', 'heading', 'lane', 'command', 'yaw', 'min_clearance'} <= set(entry)

    def test_metrics_round_trip(self, written):
        out_dir, _, metrics, _ = written
        assert read_metrics(out_dir / METRICS_FILE) == metrics

    def test_trajectory(self, written):
        out_dir, trace, _, _ = written
        rows = read_trajectory(out_dir / TRAJECTORY_FILE)
        assert rows.shape == (len(trace.frames), 3)
        assert rows[-1] == pytest.approx([trace.frames[-1].t, trace.frames[-1].x, trace.frames[-1].y])

    def test_scenario_file_reloads(self, written, short_spec):
        out_dir, _, _, _ = written
        spec = load_scenario(out_dir / SCENARIO_FILE)
        assert spec.name == 'short'
        assert spec.obstacles[0].position == pytest.approx(short_spec.obstacles[0].position)

    def test_observations_dump(self, written):
        out_dir, trace, _, _ = written
        observations = read_observations(out_dir / OBSERVATIONS_FILE)
        assert len(observations) == len(trace.frames)
        assert observations[1].timestamp == pytest.approx(0.1)
        assert len(observations[0].obstacles) == 1

    def test_plans_dump(self, written):
        out_dir, trace, _, _ = written
        plans = read_jsonl(out_dir / PLANS_FILE)
        assert len(plans) == len(trace.frames)
        first = plans[0]
        assert first['command'] == trace.frames[0].command
        plan = first['plan']
        assert plan['corridor'] == 'lane'
        assert len(plan['lattice']) == len(plan['plan']['columns'])
        assert len(plan['plan']['waypoints']) == len(plan['plan']['columns']) + 1
        assert plan['plan']['command_yaw_rad'] == pytest.approx(trace.frames[0].yaw)
        assert plan['lattice'][-1][0]['successor'] is None

    def test_no_dumps_by_default(self, tmp_path, short_spec):
        with EpisodeWriter(tmp_path / 'plain') as writer:
            trace, metrics = run_episode(short_spec, on_frame=writer.on_frame)
            writer.finish(trace, metrics, short_spec)
        assert not (tmp_path / 'plain' / OBSERVATIONS_FILE).exists()
        assert not (tmp_path / 'plain' / PLANS_FILE).exists()

