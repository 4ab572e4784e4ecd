# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Exception types of the simulated world
"""


class BatteryExhausted(RuntimeError):
    """
    The platform battery budget reached zero; the mission layer must land
    """

    def __init__(self, state):
        """
        :param state: PlatformState after the step that drained the battery
        """
        super(BatteryExhausted, self).__init__(
            'battery exhausted after {:.2f} s of flight'.format(state.elapsed))
        self.state = state
