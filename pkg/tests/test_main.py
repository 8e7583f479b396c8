"""
Tests for the main module: argument parsing, exit codes and the three subcommands.
"""

import json

import pytest
from unittest.mock import patch
from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from main import (
    EXIT_COLLIDED,
    EXIT_CONFIG_ERROR,
    EXIT_INCOMPLETE,
    EXIT_OK,
    main,
    parse_args,
)
from simulation.export import METRICS_FILE, TRACE_FILE
from track.export import read_track_csv

TURN_COMMANDS = {'left-forward', 'right-forward', 'turn-left', 'turn-right'}


def _scenario(tmp_path, name='short', **extra):
    data = {
        'name': name,
        'goal_distance_m': 2.0,
        'sensor': {'lateral_noise_sigma_m': 0.0},
    }
    data.update(extra)
    path = tmp_path / f'{name}.json'
    path.write_text(json.dumps(data))
    return path


def _wall(offsets, station=15.0, radius=0.3):
    return [{'station_m': station, 'offset_m': o, 'lane': 1, 'radius_m': radius} for o in offsets]


# =============================================================================
# TESTS FOR argument parsing
# =============================================================================

class TestParseArgs:
    """Tests for command-line argument parsing."""

    def test_run_defaults(self):
        """Test defaults of the run subcommand."""
        with patch('sys.argv', ['main.py', 'run', '--scenario', 's.json']):
            args = parse_args()
            assert args.command == 'run'
            assert args.out == 'runs'
            assert args.seed is None
            assert args.sweep is None
            assert args.dump_observations is False
            assert args.dump_plans is False

    def test_run_requires_scenario(self):
        """Test that run without --scenario is a usage error."""
        with pytest.raises(SystemExit) as exc_info:
            parse_args(['run'])
        assert exc_info.value.code == 2

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            parse_args([])

    def test_help_flag_exits(self):
        """Test that --help exits gracefully."""
        with patch('sys.argv', ['main.py', '--help']):
            with pytest.raises(SystemExit) as exc_info:
                parse_args()
            # argparse exits with 0 for --help
            assert exc_info.value.code == 0

    def test_track_defaults(self):
        args = parse_args(['track'])
        assert (args.straight, args.inner_radius, args.lane_width, args.lanes) == \
            (84.39, 36.80, 1.22, 8)


# =============================================================================
# TESTS FOR track
# =============================================================================

class TestTrackCommand:
    """Geometry export."""

    def test_default_layout(self, tmp_path, capsys):
        out = tmp_path / 'track.csv'
        assert main(['track', '--out', str(out)]) == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert summary['lanes'][0]['centerline_length_m'] == pytest.approx(400.0, abs=0.05)
        assert out.exists()

    def test_two_lanes(self, tmp_path, capsys):
        out = tmp_path / 'two.csv'
        assert main(['track', '--lanes', '2', '--lane-width', '1.22', '--out', str(out)]) == EXIT_OK
        assert {lane for lane, _ in read_track_csv(out)} == {1, 2}
        assert f"Wrote {out}" in capsys.readouterr().err

    @pytest.mark.parametrize("flags", [
        ['--inner-radius', '-1'],
        ['--straight', '0'],
        ['--lanes', '0'],
        ['--lane-width', '-1.22'],
    ])
    def test_nonpositive_dimension(self, tmp_path, capsys, flags):
        out = tmp_path / 'bad.csv'
        assert main(['track', '--out', str(out)] + flags) == EXIT_CONFIG_ERROR
        assert capsys.readouterr().err.startswith("Error:")
        assert not out.exists()


# =============================================================================
# TESTS FOR run
# =============================================================================

class TestRunCommand:
    """Episode execution, files and exit codes."""

    def test_missing_scenario(self, tmp_path, capsys):
        code = main(['run', '--scenario', str(tmp_path / 'missing.json'), '--out', str(tmp_path)])
        assert code == EXIT_CONFIG_ERROR
        assert "scenario file not found" in capsys.readouterr().err

    def test_bad_field_is_named(self, tmp_path, capsys):
        path = _scenario(tmp_path, runner={'speed': 1.0})
        assert main(['run', '--scenario', str(path), '--out', str(tmp_path)]) == EXIT_CONFIG_ERROR
        assert "runner.speed" in capsys.readouterr().err

    def test_completed_run(self, tmp_path, capsys):
        path = _scenario(tmp_path)
        out = tmp_path / 'runs'
        assert main(['run', '--scenario', str(path), '--out', str(out), '--quiet']) == EXIT_OK
        metrics = json.loads(capsys.readouterr().out)
        assert metrics['status'] == 'completed'
        assert (out / 'short' / METRICS_FILE).exists()
        assert (out / 'short' / TRACE_FILE).exists()

    def test_token_stream(self, tmp_path, capsys):
        path = _scenario(tmp_path)
        main(['run', '--scenario', str(path), '--out', str(tmp_path / 'runs')])
        out = capsys.readouterr().out
        metrics = json.loads(out[out.index('{'):])
        tokens = out[:out.index('{')].split()
        assert len(tokens) == metrics['frames']
        assert set(tokens) <= TURN_COMMANDS | {'forward'}

    def test_seed_gives_identical_traces(self, tmp_path):
        path = _scenario(tmp_path, sensor={'lateral_noise_sigma_m': 0.03})
        for out in ('a', 'b'):
            main(['run', '--scenario', str(path), '--out', str(tmp_path / out), '--seed', '7', '--quiet'])
        first = (tmp_path / 'a' / 'short' / TRACE_FILE).read_bytes()
        assert first == (tmp_path / 'b' / 'short' / TRACE_FILE).read_bytes()

    def test_collision_exit_code(self, tmp_path):
        path = _scenario(tmp_path, obstacles=_wall([0.0], station=0.1, radius=0.2))
        assert main(['run', '--scenario', str(path), '--out', str(tmp_path), '--quiet']) == EXIT_COLLIDED

    def test_stopped_exit_code(self, tmp_path):
        path = _scenario(tmp_path, goal_distance_m=30.0,
                         obstacles=_wall([-0.45, 0.0, 0.45], station=12.0, radius=0.2),
                         planner={'allow_lane_switch': False, 'lookahead_m': 0.5})
        assert main(['run', '--scenario', str(path), '--out', str(tmp_path), '--quiet']) == EXIT_INCOMPLETE

    def test_sweep(self, tmp_path, capsys):
        path = _scenario(tmp_path)
        out = tmp_path / 'sweep'
        code = main(['run', '--scenario', str(path), '--out', str(out),
                     '--sweep', 'costs.k=1:1:2', '--workers', '2'])
        assert code == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert [(entry['key'], entry['value']) for entry in summary] == [('costs.k', 1.0), ('costs.k', 2.0)]
        assert all(entry['status'] == 'completed' for entry in summary)
        assert (out / 'short' / 'costs.k=1' / METRICS_FILE).exists()
        assert (out / 'short' / 'costs.k=2' / METRICS_FILE).exists()

    def test_bad_sweep(self, tmp_path, capsys):
        path = _scenario(tmp_path)
        code = main(['run', '--scenario', str(path), '--out', str(tmp_path), '--sweep', 'costs.k=2'])
        assert code == EXIT_CONFIG_ERROR
        assert "sweep" in capsys.readouterr().err


# =============================================================================
# TESTS FOR plan-frame
# =============================================================================

class TestPlanFrameCommand:
    """Single-frame planning output."""

    def _plan(self, tmp_path, capsys, obstacles):
        scenario = _scenario(tmp_path)
        frame = tmp_path / 'frame.json'
        frame.write_text(json.dumps({'pose': {'station_m': 10.0}, 'lane': 1, 'obstacles': obstacles}))
        code = main(['plan-frame', '--scenario', str(scenario), '--frame', str(frame)])
        return code, json.loads(capsys.readouterr().out)

    def test_open_straight(self, tmp_path, capsys):
        code, output = self._plan(tmp_path, capsys, [])
        assert code == EXIT_OK
        assert output['command'] == 'forward'
        assert output['corridor'] == 'lane'
        assert {'pose', 'lane', 'observation', 'lattice', 'plan', 'reference'} <= set(output)
        assert len(output['lattice'][0]) == 5

    def test_obstacle_dead_ahead(self, tmp_path, capsys):
        code, output = self._plan(tmp_path, capsys, _wall([0.0]))
        assert code == EXIT_OK
        assert output['command'] in TURN_COMMANDS
        assert len(output['observation']['obstacles']) == 1

    def test_walled_corridor_stops(self, tmp_path, capsys):
        code, output = self._plan(tmp_path, capsys,
                                  _wall([0.45, 0.0, -0.45, -0.9, -1.35, -1.8]))
        assert code == EXIT_OK
        assert output['command'] == 'stop'
        assert output['plan'] is None

    def test_scenario_start_without_frame(self, tmp_path, capsys):
        scenario = _scenario(tmp_path)
        assert main(['plan-frame', '--scenario', str(scenario)]) == EXIT_OK
        output = json.loads(capsys.readouterr().out)
        assert output['pose']['y_m'] == pytest.approx(-36.8)

    def test_missing_frame_file(self, tmp_path, capsys):
        scenario = _scenario(tmp_path)
        code = main(['plan-frame', '--scenario', str(scenario), '--frame', str(tmp_path / 'none.json')])
        assert code == EXIT_CONFIG_ERROR
        assert "frame file not found" in capsys.readouterr().err
