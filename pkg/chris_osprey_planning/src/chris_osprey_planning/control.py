# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Waypoint segmentation and trapezoidal velocity commands

The platform flies straight at each waypoint: it accelerates at a constant
rate up to the maximum velocity and decelerates inside the braking
envelope sqrt(2 a d), stopping once it is within the arrival tolerance.
"""

import math

import numpy as np

from chris_osprey_core.base_metamodel import _ConfigMetamodel
from chris_osprey_core.geometry.pose import interpolate_yaw, wrap_angle
from chris_osprey_planning.planner import PlanState
from chris_osprey_sim.platform import VelocityCommand


class ControlConfig(_ConfigMetamodel):
    """
    Velocity limits, command rate and arrival tolerance
    """
    yaml_tag = u'!control_config'
    HUMAN_OUTPUT_NAME = 'Control Config'
    DEFAULTS = {
        'max_velocity': 1.0,
        'acceleration': 0.1,
        'command_rate': 50.0,
        'arrival_tolerance': 1.0,
        'yaw_gain': 1.0,
        'yaw_rate_cap': 0.5,
    }

    def validate(self):
        self._require(self.max_velocity > 0.0, 'max_velocity must be positive')
        self._require(self.acceleration > 0.0, 'acceleration must be positive')
        self._require(self.command_rate > 0.0, 'command_rate must be positive')
        self._require(self.arrival_tolerance >= 0.0, 'arrival_tolerance must be non-negative')
        self._require(self.yaw_gain >= 0.0 and self.yaw_rate_cap >= 0.0,
                      'yaw_gain and yaw_rate_cap must be non-negative')

    @property
    def period(self):
        """
        :return: control tick length in seconds
        """
        return 1.0 / self.command_rate


def segment_waypoints(states, max_distance):
    """
    Split a path so that no two consecutive waypoints are farther apart
    than max_distance

    :param states: list of PlanState or a PathPlan
    :param max_distance: meters (> 0)
    :return: list of PlanState; the first and last states are the inputs' own
    """
    if max_distance <= 0.0:
        raise ValueError('max_distance must be positive, got {}'.format(max_distance))
    states = states.states if hasattr(states, 'states') else list(states)
    if not states:
        return []
    waypoints = [states[0]]
    for target in states[1:]:
        previous = waypoints[-1]
        offset = target.position - previous.position
        length = float(np.linalg.norm(offset))
        if length == 0.0:
            # zero-length segments collapse onto the later state
            waypoints[-1] = target
            continue
        pieces = int(math.ceil(length / max_distance))
        for piece in range(1, pieces):
            fraction = piece / float(pieces)
            waypoints.append(PlanState(previous.position + fraction * offset,
                                       interpolate_yaw(previous.yaw, target.yaw, fraction)))
        waypoints.append(target)
    return waypoints


def velocity_command(current, target, cfg, dt=None):
    """
    Command for one control tick toward a waypoint

    :param current: PlatformState (its velocity is the previous command)
    :param target: PlanState
    :param cfg: ControlConfig
    :param dt: tick length; defaults to the configured command period
    :return: VelocityCommand, zero once within the arrival tolerance
    """
    dt = cfg.period if dt is None else dt
    offset = target.position - current.position
    remaining = float(np.linalg.norm(offset))
    if remaining <= cfg.arrival_tolerance:
        return VelocityCommand.zero()
    speed = min(cfg.max_velocity,
                current.speed + cfg.acceleration * dt,
                math.sqrt(2.0 * cfg.acceleration * remaining))
    yaw_error = wrap_angle(target.yaw - current.yaw)
    yaw_rate = float(np.clip(cfg.yaw_gain * yaw_error, -cfg.yaw_rate_cap, cfg.yaw_rate_cap))
    return VelocityCommand(offset * (speed / remaining), yaw_rate)


def arrived(current, target, cfg):
    """
    :return: True when the platform is within the arrival tolerance of target
    """
    return float(np.linalg.norm(target.position - current.position)) <= cfg.arrival_tolerance
