# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Drifted odometry source standing in for the inertial odometry estimate

Errors scale with the distance travelled: a per-meter bias (drawn once and
then random-walking per meter) plus white noise. Rotational drift is about
z only since the platform is flown with 4 degrees of freedom.
"""

import math

import numpy as np

from chris_osprey_core.base_metamodel import _ConfigMetamodel
from chris_osprey_core.geometry.pose import Pose, compose, relative


class DriftModel(_ConfigMetamodel):
    """
    Odometry drift parameters
    """
    yaml_tag = u'!drift_model'
    HUMAN_OUTPUT_NAME = 'Drift Model'
    DEFAULTS = {
        'translation_bias_sigma': 0.0,
        'yaw_bias_sigma': 0.0,
        'bias_walk_sigma': 0.0,
        'translation_noise_sigma': 0.0,
        'yaw_noise_sigma': 0.0,
        'seed': 0,
    }

    def validate(self):
        for key in ('translation_bias_sigma', 'yaw_bias_sigma', 'bias_walk_sigma',
                    'translation_noise_sigma', 'yaw_noise_sigma'):
            self._require(self.__getattribute__(key) >= 0.0, '{} must be non-negative'.format(key))

    @property
    def is_perfect(self):
        """
        :return: True when every sigma is zero (odometry equals ground truth)
        """
        return (self.translation_bias_sigma == 0.0 and self.yaw_bias_sigma == 0.0 and
                self.bias_walk_sigma == 0.0 and self.translation_noise_sigma == 0.0 and
                self.yaw_noise_sigma == 0.0)


class DriftState(object):
    """
    Random state of one odometry stream: generator plus current biases
    """

    def __init__(self, model, seed=None):
        """
        :param model: DriftModel
        :param seed: overrides model.seed (e.g. derived from the mission seed)
        """
        self.rng = np.random.default_rng(model.seed if seed is None else seed)
        self.translation_bias = self.rng.normal(0.0, 1.0, 3) * model.translation_bias_sigma
        self.yaw_bias = float(self.rng.normal(0.0, 1.0)) * model.yaw_bias_sigma
        self.distance = 0.0


def drifted_increment(true_prev, true_curr, model, state):
    """
    Relative odometry pose between two ground-truth poses, corrupted by drift

    :param true_prev: ground-truth Pose at the previous step
    :param true_curr: ground-truth Pose at the current step
    :param model: DriftModel
    :param state: DriftState (advanced in place)
    :return: relative Pose expressed in the previous body frame
    """
    motion = relative(true_prev, true_curr)
    length = float(np.linalg.norm(motion.translation))
    if model.is_perfect or length == 0.0:
        return motion

    rng = state.rng
    root = math.sqrt(length)
    if model.bias_walk_sigma > 0.0:
        state.translation_bias = state.translation_bias + rng.normal(0.0, model.bias_walk_sigma * root, 3)
    translation_error = state.translation_bias * length
    yaw_error = state.yaw_bias * length
    if model.translation_noise_sigma > 0.0:
        translation_error = translation_error + rng.normal(0.0, model.translation_noise_sigma * root, 3)
    if model.yaw_noise_sigma > 0.0:
        yaw_error += float(rng.normal(0.0, model.yaw_noise_sigma * root))
    state.distance += length
    error = Pose.from_xyz_yaw(translation_error[0], translation_error[1], translation_error[2], yaw_error)
    return compose(motion, error)
