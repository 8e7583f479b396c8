"""Main entry point for track-guide: run episodes, plan single frames, export tracks."""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from version import __version__
from errors import GuidanceError, NoFeasiblePathError, ScenarioError
from guidance.commands import DirectionCommand, command_from_yaw, emit
from perception.sensor import observe
from planning.frame import plan_frame
from simulation.episode import run_episode
from simulation.export import EpisodeWriter, dumps, frame_plan_to_dict, observation_to_dict
from simulation.metrics import Metrics
from simulation.scenario import (
    ScenarioSpec,
    apply_override,
    frame_from_dict,
    load_frame,
    parse_sweep,
    read_scenario_file,
    scenario_from_dict,
)
from simulation.trace import EpisodeStatus
from track.export import track_summary, write_track_csv
from track.layout import TrackLayout, generate_track

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_COLLIDED = 2
EXIT_INCOMPLETE = 3

STATUS_EXIT_CODES = {
    EpisodeStatus.COMPLETED.value: EXIT_OK,
    EpisodeStatus.COLLIDED.value: EXIT_COLLIDED,
    EpisodeStatus.STOPPED.value: EXIT_INCOMPLETE,
    EpisodeStatus.TIMEOUT.value: EXIT_INCOMPLETE,
}


def parse_args(argv: Optional[List[str]] = None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Track guide - plan runner paths on athletics tracks and simulate guidance"
    )
    parser.add_argument(
        '-v', '--version',
        action='version',
        version=f'%(prog)s {__version__}'
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    run = subparsers.add_parser('run', help="Run closed-loop episodes for a scenario.")
    run.add_argument('--scenario', required=True, help="Scenario file (JSON or YAML).")
    run.add_argument('--out', default='runs', help="Output directory. Default: runs.")
    run.add_argument('--seed', type=int, help="Override the scenario seed.")
    run.add_argument('--dump-observations', action='store_true',
                     help="Write every perception frame to observations.jsonl.")
    run.add_argument('--dump-plans', action='store_true',
                     help="Write every frame's lattice and plan to plans.jsonl.")
    run.add_argument('--sweep', metavar='KEY=START:STEP:END',
                     help="Run one episode per value of a dotted scenario key, e.g. costs.k=0.5:0.5:2.")
    run.add_argument('--workers', type=int, default=4,
                     help="Worker threads for sweeps. Default: 4.")
    run.add_argument('--quiet', action='store_true',
                     help="Don't print the command token stream.")

    frame = subparsers.add_parser('plan-frame', help="Plan a single frame and print it as JSON.")
    frame.add_argument('--scenario', required=True, help="Scenario file (JSON or YAML).")
    frame.add_argument('--frame', help="Frame file with pose, lane and obstacles. "
                                       "Default: the scenario start with its obstacles.")
    frame.add_argument('--seed', type=int, help="Override the scenario seed.")

    track = subparsers.add_parser('track', help="Write track geometry as CSV.")
    defaults = TrackLayout()
    track.add_argument('--straight', type=float, default=defaults.straight_length,
                       help=f"Straight length in meters. Default: {defaults.straight_length}.")
    track.add_argument('--inner-radius', type=float, default=defaults.inner_radius,
                       help=f"Lane-1 centerline radius in meters. Default: {defaults.inner_radius}.")
    track.add_argument('--lane-width', type=float, default=defaults.lane_width,
                       help=f"Lane width in meters. Default: {defaults.lane_width}.")
    track.add_argument('--lanes', type=int, default=defaults.num_lanes,
                       help=f"Number of lanes. Default: {defaults.num_lanes}.")
    track.add_argument('--points-per-arc', type=int, default=360,
                       help="Centerline samples per bend. Default: 360.")
    track.add_argument('--out', default='track.csv', help="CSV output path. Default: track.csv.")

    return parser.parse_args(argv)


def _load(path: str, seed: Optional[int]) -> Tuple[Dict[str, Any], ScenarioSpec]:
    data = read_scenario_file(Path(path))
    if seed is not None:
        data = apply_override(data, 'seed', seed)
    return data, scenario_from_dict(data)


def run_single(spec: ScenarioSpec, out_dir: Path, dump_observations: bool = False,
               dump_plans: bool = False, echo_tokens: bool = False) -> Metrics:
    """Run one episode and write its files to out_dir."""
    print(f"Running scenario {spec.name} (seed {spec.seed}) -> {out_dir}", file=sys.stderr)
    with EpisodeWriter(out_dir, dump_observations, dump_plans) as writer:
        def on_frame(record, obs, frame_plan):
            writer.on_frame(record, obs, frame_plan)
            if echo_tokens:
                print(record.command)

        trace, metrics = run_episode(spec, on_frame=on_frame)
        writer.finish(trace, metrics, spec)
    return metrics


def cmd_run(args) -> int:
    """Run a scenario (or a sweep over one of its keys).

    Returns:
        0 completed, 2 collided, 3 stopped or timed out, 1 configuration error.
        A sweep returns the first non-zero code in sweep order.
    """
    try:
        data, spec = _load(args.scenario, args.seed)
        episodes = [(spec, Path(args.out) / spec.name, None)]
        if args.sweep:
            key, values = parse_sweep(args.sweep)
            episodes = []
            for value in values:
                variant = scenario_from_dict(apply_override(data, key, value))
                out_dir = Path(args.out) / spec.name / f"{key}={value:g}"
                episodes.append((variant, out_dir, (key, value)))
    except (ScenarioError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if not args.sweep:
        metrics = run_single(spec, episodes[0][1], args.dump_observations, args.dump_plans,
                             echo_tokens=not args.quiet)
        print(dumps(metrics.to_dict(), indent=2))
        return STATUS_EXIT_CODES[metrics.status]

    def job(episode):
        variant, out_dir, _ = episode
        return run_single(variant, out_dir, args.dump_observations, args.dump_plans)

    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(job, episodes))

    summary = []
    for (_, _, (key, value)), metrics in zip(episodes, results):
        entry = {'key': key, 'value': value}
        entry.update(metrics.to_dict())
        summary.append(entry)
    print(dumps(summary, indent=2))

    codes = [STATUS_EXIT_CODES[m.status] for m in results]
    return next((code for code in codes if code != EXIT_OK), EXIT_OK)


def cmd_plan_frame(args) -> int:
    """Plan one frame and print observation, lattice, plan and command as JSON.

    An infeasible plan is reported with command "stop" and exit 0.
    """
    try:
        _, spec = _load(args.scenario, args.seed)
        frame = load_frame(Path(args.frame), spec) if args.frame else frame_from_dict(None, spec)
    except (ScenarioError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    track = generate_track(spec.layout, spec.points_per_arc)
    obs = observe(track, frame.obstacles, frame.pose, frame.lane, spec.sensor,
                  seed=spec.seed, timestamp=frame.timestamp)

    output: Dict[str, Any] = {
        'pose': {'x_m': frame.pose[0], 'y_m': frame.pose[1], 'heading_rad': frame.pose[2]},
        'lane': frame.lane,
        'observation': observation_to_dict(obs),
    }
    try:
        frame_plan = plan_frame(obs, spec.planner)
    except NoFeasiblePathError as e:
        command = DirectionCommand.STOP
        output['plan'] = None
        output['reason'] = str(e)
    except GuidanceError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    else:
        command = command_from_yaw(frame_plan.result.command_yaw, spec.sectors)
        output.update(frame_plan_to_dict(frame_plan))

    output['command'] = emit(command)
    print(dumps(output, indent=2))
    return EXIT_OK


def cmd_track(args) -> int:
    """Write the track CSV and print a summary."""
    if args.straight <= 0.0:
        print("Error: straight length must be positive", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        layout = TrackLayout(
            straight_length=args.straight,
            inner_radius=args.inner_radius,
            lane_width=args.lane_width,
            num_lanes=args.lanes,
        )
        track = generate_track(layout, args.points_per_arc)
        write_track_csv(track, Path(args.out))
    except (GuidanceError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    print(f"  Wrote {args.out}", file=sys.stderr)
    print(dumps(track_summary(track), indent=2))
    return EXIT_OK


COMMANDS = {
    'run': cmd_run,
    'plan-frame': cmd_plan_frame,
    'track': cmd_track,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function."""
    args = parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
