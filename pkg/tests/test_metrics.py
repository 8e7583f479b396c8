"""Tests for episode metric aggregation."""

import pytest
from pathlib import Path

import sys
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from errors import InvalidInputError
from simulation.metrics import Metrics, compute_metrics
from simulation.scenario import ScenarioSpec
from simulation.trace import EpisodeStatus, EpisodeTrace, FrameRecord


def record(t, progress=0.0, lane=1, clearance=None, command='forward',
           corridor='lane', on_track=True, degraded=False):
    return FrameRecord(t=t, x=progress, y=0.0, heading=0.0, lane=lane, command=command,
                       yaw=0.0, min_clearance=clearance, progress=progress,
                       corridor=corridor, degraded=degraded, on_track=on_track)


def trace_of(*frames, status=EpisodeStatus.COMPLETED):
    return EpisodeTrace(scenario='test', frames=list(frames), status=status)


@pytest.fixture
def spec():
    return ScenarioSpec()


# =============================================================================
# TESTS FOR compute_metrics
# =============================================================================

class TestComputeMetrics:
    """Aggregation of per-frame records."""

    def test_average_speed(self, spec):
        metrics = compute_metrics(trace_of(record(32.9, 50.0), record(65.8, 100.0)), spec)
        assert metrics.distance == 100.0
        assert metrics.elapsed == 65.8
        assert metrics.average_speed == pytest.approx(1.52, abs=0.005)
        assert metrics.average_speed == pytest.approx(metrics.distance / metrics.elapsed, abs=1e-9)

    def test_single_still_frame(self, spec):
        metrics = compute_metrics(trace_of(record(0.1), status=EpisodeStatus.STOPPED), spec)
        assert metrics.distance == 0.0
        assert metrics.lane_departures == 0
        assert metrics.frames == 1
        assert metrics.status == 'stopped'

    def test_min_clearance(self, spec):
        frames = [record(0.1, clearance=2.0), record(0.2, clearance=0.6), record(0.3, clearance=1.1)]
        assert compute_metrics(trace_of(*frames), spec).min_clearance == pytest.approx(0.6)

    def test_no_obstacles_no_clearance(self, spec):
        assert compute_metrics(trace_of(record(0.1)), spec).min_clearance is None

    def test_departures_and_violations(self, spec):
        frames = [
            record(0.1, lane=1),
            record(0.2, lane=2, corridor='right'),   # planned switch
            record(0.3, lane=2, corridor='right'),
            record(0.4, lane=1, corridor='lane'),    # drifted across a line
            record(0.5, lane=1, on_track=False),
        ]
        metrics = compute_metrics(trace_of(*frames), spec)
        assert metrics.lane_departures == 2
        assert metrics.boundary_violations == 2
        assert metrics.final_lane == 1

    def test_lane_change_without_switch_corridor(self, spec):
        frames = [
            record(0.1, lane=1),
            record(0.2, lane=2, command='stop', corridor='none'),              # drifted while stopped
            record(0.3, lane=1, command='turn-left', corridor='none', degraded=True),
            record(0.4, lane=2, corridor='left'),                              # planned switch
        ]
        metrics = compute_metrics(trace_of(*frames), spec)
        assert metrics.lane_departures == 3
        assert metrics.boundary_violations == 2

    def test_command_counts(self, spec):
        frames = [
            record(0.1, command='stop', corridor='none'),
            record(0.2, command='stop', corridor='none'),
            record(0.3, command='turn-left', corridor='none', degraded=True),
        ]
        metrics = compute_metrics(trace_of(*frames), spec)
        assert metrics.stop_frames == 2
        assert metrics.degraded_frames == 1

    def test_empty_trace(self, spec):
        with pytest.raises(InvalidInputError):
            compute_metrics(trace_of(), spec)

    def test_dict_round_trip(self, spec):
        metrics = compute_metrics(trace_of(record(1.0, 1.3, clearance=0.7)), spec)
        data = metrics.to_dict()
        assert data['average_speed_mps'] == pytest.approx(1.3)
        assert data['status'] == 'completed'
        assert Metrics.from_dict(data) == metrics
