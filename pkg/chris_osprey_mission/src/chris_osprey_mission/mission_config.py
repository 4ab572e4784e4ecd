# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Mission configuration: the scene, mission-level settings and one section
per module configuration

A mission file is a YAML mapping with a required ``format_version`` and
optional sections (``sensor``, ``drift``, ``submap``, ``icp``, ``graph``,
``loop_closure``, ``scan_context``, ``see``, ``plan``, ``control``); every
omitted field takes its default value.
"""

import os

import numpy as np

from chris_osprey_core.base_metamodel import _ConfigMetamodel
from chris_osprey_core.utilities.utility import read_yaml_document, require_format_version, write_yaml_document
from chris_osprey_planning.control import ControlConfig
from chris_osprey_planning.planner import PlanConfig
from chris_osprey_planning.see import SeeConfig
from chris_osprey_sim.drift import DriftModel
from chris_osprey_sim.lidar import SensorModel
from chris_osprey_sim.platform import DEFAULT_BATTERY_BUDGET
from chris_osprey_slam.place_recognition import ScanContextConfig
from chris_osprey_slam.pose_graph import GraphConfig, LoopClosureConfig
from chris_osprey_slam.registration import IcpConfig, SubmapConfig

MISSION_FORMAT_VERSION = 1

# Section key -> configuration type
SECTIONS = {
    'sensor': SensorModel,
    'drift': DriftModel,
    'submap': SubmapConfig,
    'icp': IcpConfig,
    'graph': GraphConfig,
    'loop_closure': LoopClosureConfig,
    'scan_context': ScanContextConfig,
    'see': SeeConfig,
    'plan': PlanConfig,
    'control': ControlConfig,
}

_GUST_KEYS = {'start', 'duration', 'velocity'}


class MissionConfig(_ConfigMetamodel):
    """
    Everything a mission run needs besides the scene geometry
    """
    yaml_tag = u'!mission_config'
    HUMAN_OUTPUT_NAME = 'Mission Config'
    DEFAULTS = dict({
        'scene': '',
        'output_directory': 'mission_output',
        'battery_budget': float(DEFAULT_BATTERY_BUDGET),
        'seed': 0,
        'takeoff_height': 3.0,
        'scan_tick_stride': 5,
        'relocalization_scan_budget': 50,
        'intervention_deviation': 3.0,
        'max_replans': 5,
        'max_loop_candidates': 3,
        'grid_edge': 0.5,
        'coverage_threshold': 0.1,
        'accuracy_cap': 1.0,
        'ground_truth_density': 100.0,
        'gusts': [],
    }, **{key: None for key in SECTIONS})

    def validate(self):
        for key, config_type in SECTIONS.items():
            value = self.__getattribute__(key)
            if not isinstance(value, config_type):
                self.__setattr__(key, config_type.from_dict(value))
        self._require(self.seed >= 0, 'seed must be non-negative')
        self._require(self.battery_budget > 0.0, 'battery_budget must be positive')
        self._require(self.takeoff_height > 0.0, 'takeoff_height must be positive')
        self._require(self.scan_tick_stride >= 1, 'scan_tick_stride must be at least 1')
        self._require(self.relocalization_scan_budget >= 1, 'relocalization_scan_budget must be at least 1')
        self._require(self.intervention_deviation > 0.0, 'intervention_deviation must be positive')
        self._require(self.max_replans >= 0, 'max_replans must be non-negative')
        self._require(self.max_loop_candidates >= 1, 'max_loop_candidates must be at least 1')
        self._require(self.grid_edge > 0.0, 'grid_edge must be positive')
        self._require(self.coverage_threshold > 0.0, 'coverage_threshold must be positive')
        self._require(self.accuracy_cap > 0.0, 'accuracy_cap must be positive')
        self._require(self.ground_truth_density > 0.0, 'ground_truth_density must be positive')
        if self.scene:
            self._require(os.path.isfile(self.scene), 'scene file "{}" does not exist'.format(self.scene))
        self.gusts = [self._gust(gust) for gust in self.gusts]

    def _gust(self, gust):
        self._require(isinstance(gust, dict) and set(gust) == _GUST_KEYS,
                      'each gust needs exactly start, duration and velocity')
        velocity = [float(v) for v in gust['velocity']]
        self._require(len(velocity) == 3, 'gust velocity must be a 3-vector')
        start = float(gust['start'])
        duration = float(gust['duration'])
        self._require(start >= 0.0 and duration > 0.0, 'gusts need start >= 0 and a positive duration')
        return {'start': start, 'duration': duration, 'velocity': velocity}

    def to_dict(self):
        data = super(MissionConfig, self).to_dict()
        for key in SECTIONS:
            data[key] = data[key].to_dict()
        return data

    @property
    def tick(self):
        """
        :return: control tick length in seconds
        """
        return self.control.period

    def gust_at(self, t):
        """
        :param t: mission time (s)
        :return: world-frame disturbance velocity, or None outside every gust
        """
        velocity = None
        for gust in self.gusts:
            if gust['start'] <= t < gust['start'] + gust['duration']:
                velocity = np.asarray(gust['velocity']) if velocity is None else velocity + gust['velocity']
        return velocity

    def gust_end(self, t):
        """
        :return: end time of the latest gust active at t (t when none is)
        """
        ends = [gust['start'] + gust['duration'] for gust in self.gusts
                if gust['start'] <= t < gust['start'] + gust['duration']]
        return max(ends) if ends else t

    def _string_rows(self):
        name = self.HUMAN_OUTPUT_NAME
        rows = ['  ' + (len(name) + 2) * '-', '   {} :'.format(name)]
        for key in sorted(self.DEFAULTS):
            if key in SECTIONS:
                continue
            value = self.__getattribute__(key)
            if isinstance(value, list):
                rows.append('        {} :'.format(key))
                rows.extend('            - {}'.format(item) for item in value)
            else:
                rows.append('        {} : {}'.format(key, value))
        for key in sorted(SECTIONS):
            rows.extend('    ' + row for row in self.__getattribute__(key)._string_rows())
        return rows


def load_mission_config(file_path):
    """
    Read a mission file; a relative scene path is resolved against the
    directory of the mission file

    :param file_path: YAML mission file
    :return: MissionConfig
    :raises SessionIOError: unreadable file
    :raises ParseError: not a YAML mapping
    :raises FormatVersionMismatch: missing or unsupported format_version
    :raises ValidationError: unknown keys or invalid values
    """
    document = read_yaml_document(file_path)
    require_format_version(document, MISSION_FORMAT_VERSION, file_path)
    del document['format_version']
    scene = document.get('scene')
    if scene and not os.path.isabs(str(scene)):
        document['scene'] = os.path.join(os.path.dirname(os.path.abspath(file_path)), str(scene))
    return MissionConfig.from_dict(document)


def save_mission_config(config, file_path):
    """
    :param config: MissionConfig
    :param file_path: destination YAML file
    :raises SessionIOError: if the file cannot be written
    """
    data = config.to_dict()
    data['format_version'] = MISSION_FORMAT_VERSION
    write_yaml_document(file_path, data)
