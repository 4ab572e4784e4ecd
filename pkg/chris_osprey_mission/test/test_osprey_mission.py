# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

import os

import pytest
import yaml

from chris_osprey_core.geometry.ply import read_ply
from chris_osprey_core.utilities.utility import read_yaml_document
from chris_osprey_mission.osprey_mission import get_options, main


def _mission_file(tmp_path, **fields):
    document = {'format_version': 1, 'scene': 'scene.yaml',
                'sensor': {'horizontal_resolution': 120, 'vertical_resolution': 16}}
    document.update(fields)
    path = str(tmp_path / 'mission.yaml')
    with open(path, 'w') as fout:
        yaml.safe_dump(document, fout)
    return path


def test_version():
    assert main(['-v']) == 0


def test_command_is_required():
    with pytest.raises(SystemExit):
        get_options([])


def test_options():
    options = get_options(['run', '-c', 'mission.yaml', '-s', '4', '-b', '30'])
    assert options.command == 'run'
    assert options.seed == 4
    assert options.battery == 30.0
    assert options.out is None
    options = get_options(['export', '-m', 'out', '-f', 'csv'])
    assert options.target == 'export'
    with pytest.raises(SystemExit):
        get_options(['export', '-m', 'out', '-f', 'obj'])


def test_configuration_errors(tmp_path, box_scene_file):
    assert main(['run', '-c', _mission_file(tmp_path, battery_budjet=10.0)]) == 2
    path = str(tmp_path / 'unversioned.yaml')
    with open(path, 'w') as fout:
        yaml.safe_dump({'scene': 'scene.yaml'}, fout)
    assert main(['run', '-c', path]) == 2
    assert main(['run', '-c', str(tmp_path / 'absent.yaml')]) == 1


def test_run_eval_and_export(tmp_path, box_scene_file):
    out = str(tmp_path / 'mission')
    assert main(['run', '-c', _mission_file(tmp_path), '-o', out, '-b', '10']) == 3
    assert main(['eval', '-m', out, '-e', box_scene_file, '-t', '0.3']) == 0
    assert read_yaml_document(os.path.join(out, 'metrics.txt'))['coverage']['threshold'] == 0.3

    target = str(tmp_path / 'export')
    for export_format in ('ply', 'csv', 'yaml'):
        assert main(['export', '-m', out, '-f', export_format, '-t', target]) == 0
    assert len(read_ply(os.path.join(target, 'map.ply'))) == 0
    with open(os.path.join(target, 'trajectory.csv')) as fin:
        assert fin.readline().startswith('t,x,y,z,yaw')
    assert read_yaml_document(os.path.join(target, 'metrics.yaml'))['format_version'] == 1

    # compare needs a scene
    assert main(['export', '-m', out, '-f', 'compare', '-t', target]) == 2
    assert main(['export', '-m', out, '-f', 'compare', '-t', target, '-e', box_scene_file]) == 0
    assert os.path.isfile(os.path.join(target, 'covered.ply'))
    assert os.path.isfile(os.path.join(target, 'uncovered.ply'))
