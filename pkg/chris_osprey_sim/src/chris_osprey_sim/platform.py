# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Kinematic 4-DoF platform with a battery budget
"""

import numpy as np

from chris_osprey_core.geometry.pose import Pose, wrap_angle
from chris_osprey_sim.exceptions import BatteryExhausted

DEFAULT_BATTERY_BUDGET = 900.0
DEFAULT_CLEARANCE = 1.0


class VelocityCommand(object):
    """
    Linear velocity (m/s, world frame) and yaw rate (rad/s)
    """
    __slots__ = ('linear', 'yaw_rate')

    def __init__(self, linear=(0.0, 0.0, 0.0), yaw_rate=0.0):
        self.linear = np.array(linear, dtype=np.float64).reshape(3)
        self.yaw_rate = float(yaw_rate)

    @classmethod
    def zero(cls):
        return cls()

    @property
    def speed(self):
        return float(np.linalg.norm(self.linear))

    def to_list(self):
        return [float(v) for v in self.linear] + [self.yaw_rate]

    def __repr__(self):
        return 'VelocityCommand({}, yaw_rate={:.4f})'.format(list(self.linear), self.yaw_rate)


class PlatformState(object):
    """
    Position + yaw, commanded velocity, elapsed flight time and remaining battery
    """
    __slots__ = ('position', 'yaw', 'velocity', 'yaw_rate', 'elapsed', 'battery')

    def __init__(self, position, yaw, velocity=(0.0, 0.0, 0.0), yaw_rate=0.0, elapsed=0.0,
                 battery=DEFAULT_BATTERY_BUDGET):
        self.position = np.array(position, dtype=np.float64).reshape(3)
        self.yaw = float(yaw)
        self.velocity = np.array(velocity, dtype=np.float64).reshape(3)
        self.yaw_rate = float(yaw_rate)
        self.elapsed = float(elapsed)
        self.battery = max(0.0, float(battery))

    @classmethod
    def at_pose(cls, pose, battery=DEFAULT_BATTERY_BUDGET):
        """
        Platform at rest at a pose (roll and pitch dropped)
        """
        return cls(pose.translation, pose.yaw, battery=battery)

    @property
    def pose(self):
        """
        :return: Pose with roll and pitch fixed at zero
        """
        return Pose.from_xyz_yaw(self.position[0], self.position[1], self.position[2], self.yaw)

    @property
    def speed(self):
        return float(np.linalg.norm(self.velocity))

    def __repr__(self):
        return 'PlatformState(position={}, yaw={:.4f}, speed={:.4f}, elapsed={:.2f}, battery={:.2f})'.format(
            list(self.position), self.yaw, self.speed, self.elapsed, self.battery)


def step_platform(state, command, dt, disturbance=None, max_speed=None):
    """
    Integrate the platform over one control tick

    :param state: PlatformState
    :param command: VelocityCommand
    :param dt: tick length in seconds (> 0)
    :param disturbance: optional world-frame velocity added to the command (m/s)
    :param max_speed: commanded speed cap (m/s); None leaves the command as is
    :return: new PlatformState
    :raises BatteryExhausted: when the battery budget reaches zero (carries the new state)
    """
    if dt <= 0.0:
        raise ValueError('dt must be positive, got {}'.format(dt))
    velocity = np.array(command.linear, dtype=np.float64)
    speed = float(np.linalg.norm(velocity))
    if max_speed is not None and speed > max_speed:
        velocity = velocity * (max_speed / speed)
    motion = velocity if disturbance is None else velocity + np.asarray(disturbance, dtype=np.float64)
    yaw = state.yaw if command.yaw_rate == 0.0 else wrap_angle(state.yaw + command.yaw_rate * dt)
    new_state = PlatformState(state.position + motion * dt, yaw,
                              velocity, command.yaw_rate, state.elapsed + dt, state.battery - dt)
    if new_state.battery <= 0.0:
        raise BatteryExhausted(new_state)
    return new_state
