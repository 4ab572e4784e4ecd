# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

import math

import numpy as np
import pytest

from chris_osprey_core.exceptions import ValidationError
from chris_osprey_planning.control import ControlConfig, arrived, segment_waypoints, velocity_command
from chris_osprey_planning.planner import PlanState
from chris_osprey_sim.platform import PlatformState, step_platform


def test_config_invariants():
    with pytest.raises(ValidationError):
        ControlConfig(max_velocity=0.0)
    with pytest.raises(ValidationError):
        ControlConfig(acceleration=-0.1)
    assert ControlConfig().period == pytest.approx(0.02)


def test_short_segment_unchanged():
    states = [PlanState((0.0, 0.0, 3.0)), PlanState((4.0, 0.0, 3.0))]
    assert segment_waypoints(states, 5.0) == states


def test_long_segment_split_evenly():
    start = PlanState((0.0, 0.0, 3.0), 0.0)
    goal = PlanState((12.0, 0.0, 3.0), 0.6)
    waypoints = segment_waypoints([start, goal], 5.0)
    assert len(waypoints) == 4
    assert waypoints[0] is start
    assert waypoints[-1] is goal
    gaps = [a.distance_to(b) for a, b in zip(waypoints[:-1], waypoints[1:])]
    assert gaps == pytest.approx([4.0, 4.0, 4.0])
    assert [w.yaw for w in waypoints] == pytest.approx([0.0, 0.2, 0.4, 0.6])


def test_zero_length_path():
    state = PlanState((1.0, 2.0, 3.0), 0.4)
    assert segment_waypoints([state, PlanState((1.0, 2.0, 3.0), 0.4)], 5.0) == [state]
    assert segment_waypoints([state], 5.0) == [state]


def test_every_gap_within_limit(rng):
    states = [PlanState(p) for p in rng.uniform(-20.0, 20.0, size=(10, 3))]
    waypoints = segment_waypoints(states, 5.0)
    gaps = [a.distance_to(b) for a, b in zip(waypoints[:-1], waypoints[1:])]
    assert max(gaps) <= 5.0 + 1e-9
    assert waypoints[0] == states[0] and waypoints[-1] == states[-1]


def test_ramp_from_rest():
    command = velocity_command(PlatformState((0.0, 0.0, 3.0), 0.0), PlanState((100.0, 0.0, 3.0)),
                               ControlConfig(), dt=0.02)
    assert command.speed == pytest.approx(0.002, abs=1e-12)
    assert command.linear[0] > 0.0
    assert command.linear[1] == 0.0 and command.linear[2] == 0.0


def test_zero_within_arrival_tolerance():
    command = velocity_command(PlatformState((0.0, 0.0, 3.0), 0.0, velocity=(1.0, 0.0, 0.0)),
                               PlanState((0.8, 0.0, 3.0), 2.0), ControlConfig())
    assert command.speed == 0.0
    assert command.yaw_rate == 0.0


def test_braking_envelope():
    cfg = ControlConfig(arrival_tolerance=0.0)
    command = velocity_command(PlatformState((0.0, 0.0, 3.0), 0.0, velocity=(1.0, 0.0, 0.0)),
                               PlanState((0.05, 0.0, 3.0)), cfg)
    assert command.speed <= math.sqrt(2 * 0.1 * 0.05) + 1e-12


def test_yaw_rate_capped():
    cfg = ControlConfig()
    command = velocity_command(PlatformState((0.0, 0.0, 3.0), 0.0), PlanState((10.0, 0.0, 3.0), 3.0), cfg)
    assert command.yaw_rate == pytest.approx(0.5)
    command = velocity_command(PlatformState((0.0, 0.0, 3.0), 0.0), PlanState((10.0, 0.0, 3.0), -0.2), cfg)
    assert command.yaw_rate == pytest.approx(-0.2)


def test_flight_respects_limits():
    cfg = ControlConfig()
    state = PlatformState((0.0, 0.0, 3.0), 0.0, battery=1000.0)
    target = PlanState((30.0, 4.0, 5.0), 1.0)
    speeds = [0.0]
    for _ in range(int(200.0 / cfg.period)):
        if arrived(state, target, cfg):
            break
        command = velocity_command(state, target, cfg)
        speeds.append(command.speed)
        state = step_platform(state, command, cfg.period)
        remaining = np.linalg.norm(target.position - state.position)
        assert command.speed <= cfg.max_velocity + 1e-12
    assert arrived(state, target, cfg)
    assert np.all(np.diff(speeds) <= cfg.acceleration * cfg.period + 1e-9)
    assert remaining <= cfg.arrival_tolerance
