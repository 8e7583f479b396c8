"""Closed-loop episode: observe, plan, command and move at the planning rate."""

import math
from typing import Callable, Optional, Tuple

from errors import GuidanceError, NoFeasiblePathError
from guidance.commands import DirectionCommand, command_from_yaw, emit
from perception.sensor import Observation, min_clearance, observe, swept_clearance
from planning.frame import FramePlan, plan_frame
from simulation.metrics import Metrics, compute_metrics
from simulation.runner import RunnerState, step_runner
from simulation.scenario import ScenarioSpec
from simulation.trace import EpisodeStatus, EpisodeTrace, FrameRecord
from track.layout import TrackModel, generate_track, lane_at


FrameCallback = Callable[[FrameRecord, Observation, Optional[FramePlan]], None]


def _wrapped_delta(delta: float, perimeter: float) -> float:
    """Station change mapped into (-perimeter/2, perimeter/2]."""
    delta = math.fmod(delta, perimeter)
    if delta > perimeter / 2.0:
        delta -= perimeter
    elif delta <= -perimeter / 2.0:
        delta += perimeter
    return delta


def run_episode(spec: ScenarioSpec, track: Optional[TrackModel] = None,
                on_frame: Optional[FrameCallback] = None) -> Tuple[EpisodeTrace, Metrics]:
    """Run one closed-loop episode.

    Args:
        spec: Scenario to run
        track: Pre-generated track for spec.layout (generated when omitted)
        on_frame: Called after every frame with the record, the observation
            and the frame plan (None when planning failed)

    Returns:
        Tuple of (EpisodeTrace, Metrics)
    """
    if track is None:
        track = generate_track(spec.layout, spec.points_per_arc)

    x, y, heading = track.pose_at(spec.start_station, 0.0, spec.start_lane)
    state = RunnerState(position=(x, y), heading=heading, speed=spec.speed,
                        current_lane=spec.start_lane)
    dt = spec.dt
    perimeter = spec.layout.lane_length(spec.start_lane)
    stop_limit = int(math.floor(spec.stop_timeout / dt + 1e-9))

    trace = EpisodeTrace(scenario=spec.name)
    previous = DirectionCommand.FORWARD
    last_station = track.station(state.position, spec.start_lane)
    progress = 0.0
    stop_run = 0
    frame = 0

    while trace.status is None:
        obs = observe(track, spec.obstacles, state.pose, state.current_lane, spec.sensor,
                      seed=[spec.seed, frame], timestamp=frame * dt)

        frame_plan = None
        yaw = None
        corridor = 'none'
        degraded = False
        try:
            frame_plan = plan_frame(obs, spec.planner)
        except NoFeasiblePathError:
            command = DirectionCommand.STOP
        except GuidanceError:
            command = previous
            degraded = True
        else:
            yaw = frame_plan.result.command_yaw
            corridor = frame_plan.corridor_kind
            command = command_from_yaw(yaw, spec.sectors)

        token = emit(command)
        start = state.position
        state = step_runner(state, command, dt, spec.turn_rates, track)

        clearance = min_clearance(state.position, spec.obstacles)
        swept = swept_clearance(start, state.position, spec.obstacles)
        if swept is not None and swept < 0.0:
            # The step cut through a footprint between frame positions.
            clearance = min(clearance, swept)

        station = track.station(state.position, spec.start_lane)
        progress += _wrapped_delta(station - last_station, perimeter)
        last_station = station

        record = FrameRecord(
            t=(frame + 1) * dt,
            x=state.position[0],
            y=state.position[1],
            heading=state.heading,
            lane=state.current_lane,
            command=token,
            yaw=yaw,
            min_clearance=clearance,
            progress=progress,
            corridor=corridor,
            degraded=degraded,
            on_track=lane_at(track, state.position) is not None,
        )
        trace.frames.append(record)
        if on_frame is not None:
            on_frame(record, obs, frame_plan)

        previous = command
        stop_run = stop_run + 1 if command is DirectionCommand.STOP else 0

        if record.min_clearance is not None and record.min_clearance < 0.0:
            trace.status = EpisodeStatus.COLLIDED
        elif progress >= spec.goal_distance:
            trace.status = EpisodeStatus.COMPLETED
        elif stop_run > stop_limit:
            trace.status = EpisodeStatus.STOPPED
        elif record.t >= spec.time_budget:
            trace.status = EpisodeStatus.TIMEOUT
        frame += 1

    return trace, compute_metrics(trace, spec)
