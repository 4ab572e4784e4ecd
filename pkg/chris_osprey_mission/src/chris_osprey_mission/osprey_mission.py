#!/usr/bin/python
# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
 Command line driver: run, resume, evaluate and export Osprey mapping missions
"""
import argparse
import os
import shutil
import sys

from chris_osprey_core.exceptions import FormatVersionMismatch, ParseError, ValidationError
from chris_osprey_core.geometry.ply import ASCII, read_ply, write_ply
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_core.utilities.utility import read_yaml_document, write_yaml_document
from chris_osprey_mission import __version__
from chris_osprey_mission.evaluation import compare_maps, ground_truth_cloud
from chris_osprey_mission.mission_config import MissionConfig, load_mission_config
from chris_osprey_mission.mission_runner import (MAP_FILE, METRICS_FILE, MISSION_STATE_FILE, SESSION_DIRECTORY,
                                                 TRAJECTORY_FILE, evaluate, resume_mission, run_mission,
                                                 run_scripted)
from chris_osprey_sim.scene import load_scene

EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def get_options(argv):
    """
    Get the command line arguments
    :param argv: command line arguments (without the program name)
    """
    parser = argparse.ArgumentParser(prog='osprey_mission',
                                     description='Autonomous aerial mapping missions in a simulated world')

    #pylint: disable=line-too-long
    parser.add_argument('-v', '--version', dest='version', default=False, action='store_true', help='display version information')
    parser.add_argument('-lt', '--logger_threshold', dest='logger_threshold',
                        choices=sorted(LoggerLevel.NAMES), default='INFO',
                        help='logger threshold (default=`INFO`)')
    commands = parser.add_subparsers(dest='command')

    run = commands.add_parser('run', help='fly a new autonomous mission')
    run.add_argument('-c', '--config', dest='config', required=True, type=str, help='mission configuration file')
    run.add_argument('-o', '--out', dest='out', default=None, type=str, help='mission output directory (default from config)')
    run.add_argument('-s', '--seed', dest='seed', default=None, type=int, help='override the master seed')
    run.add_argument('-b', '--battery', dest='battery', default=None, type=float, help='override the battery budget (s)')

    resume = commands.add_parser('resume', help='resume a mission from its saved session')
    resume.add_argument('-S', '--session', dest='session', required=True, type=str, help='session directory')
    resume.add_argument('-o', '--out', dest='out', default=None, type=str, help='mission output directory (default: parent of the session)')
    resume.add_argument('-b', '--battery', dest='battery', default=None, type=float, help='override the battery budget (s)')

    scripted = commands.add_parser('scripted', help='fly a fixed waypoint list (no view planning)')
    scripted.add_argument('-c', '--config', dest='config', required=True, type=str, help='mission configuration file')
    scripted.add_argument('-w', '--waypoints', dest='waypoints', required=True, type=str, help='YAML file with a "waypoints" list of [x, y, z(, yaw)]')
    scripted.add_argument('-o', '--out', dest='out', default=None, type=str, help='mission output directory (default from config)')
    scripted.add_argument('-n', '--no-loop-closure', dest='no_loop_closure', default=False, action='store_true', help='disable loop closures')

    evaluation = commands.add_parser('eval', help='compute the metrics of a mission directory')
    evaluation.add_argument('-m', '--mission', dest='mission', required=True, type=str, help='mission directory')
    evaluation.add_argument('-e', '--scene', dest='scene', required=True, type=str, help='scene file to compare against')
    evaluation.add_argument('-t', '--threshold', dest='threshold', default=None, type=float, help='coverage threshold (m)')

    export = commands.add_parser('export', help='export mission artifacts')
    export.add_argument('-m', '--mission', dest='mission', required=True, type=str, help='mission directory')
    export.add_argument('-f', '--format', dest='format', required=True, choices=['ply', 'csv', 'yaml', 'compare'], help='export format')
    export.add_argument('-t', '--target', dest='target', default='export', type=str, help="target output directory (default='export')")
    export.add_argument('-e', '--scene', dest='scene', default=None, type=str, help='scene file (compare format only)')

    options = parser.parse_args(argv)
    if options.command is None and not options.version:
        parser.error('a command is required')
    return options


def _mission_config(mission_directory):
    """
    :return: MissionConfig saved with a mission, or the defaults when absent
    """
    state_path = os.path.join(mission_directory, SESSION_DIRECTORY, MISSION_STATE_FILE)
    if not os.path.isfile(state_path):
        return MissionConfig()
    return MissionConfig.from_dict(read_yaml_document(state_path).get('config'))


def _configured(options):
    config = load_mission_config(options.config)
    overrides = {}
    if getattr(options, 'seed', None) is not None:
        overrides['seed'] = options.seed
    if getattr(options, 'battery', None) is not None:
        overrides['battery_budget'] = options.battery
    if getattr(options, 'no_loop_closure', False):
        overrides['loop_closure'] = config.loop_closure.copy(enabled=False)
    return config.copy(**overrides) if overrides else config


def export(mission_directory, export_format, target, scene_path=None):
    """
    Write mission artifacts in a standalone form

    :param mission_directory: mission directory
    :param export_format: ply (ASCII map), csv (trajectory), yaml (metrics) or
        compare (map split into covered.ply and uncovered.ply against the scene)
    :param target: output directory
    :param scene_path: scene file, required by compare
    :return: list of written files
    """
    if not os.path.isdir(target):
        os.makedirs(target)
    if export_format == 'ply':
        path = os.path.join(target, MAP_FILE)
        write_ply(path, read_ply(os.path.join(mission_directory, MAP_FILE)), encoding=ASCII)
        return [path]
    if export_format == 'csv':
        path = os.path.join(target, TRAJECTORY_FILE)
        shutil.copyfile(os.path.join(mission_directory, TRAJECTORY_FILE), path)
        return [path]
    if export_format == 'yaml':
        path = os.path.join(target, 'metrics.yaml')
        write_yaml_document(path, read_yaml_document(os.path.join(mission_directory, METRICS_FILE)))
        return [path]
    if scene_path is None:
        raise ValidationError('export --format compare needs --scene')
    config = _mission_config(mission_directory)
    reference = ground_truth_cloud(load_scene(scene_path), config.ground_truth_density, config.seed)
    covered, uncovered = compare_maps(read_ply(os.path.join(mission_directory, MAP_FILE)), reference,
                                      config.coverage_threshold)
    paths = [os.path.join(target, 'covered.ply'), os.path.join(target, 'uncovered.ply')]
    write_ply(paths[0], covered)
    write_ply(paths[1], uncovered)
    return paths


def main(argv):
    """
    Dispatch a command

    :param argv: command line arguments (without the program name)
    :return: process exit status (0 complete, 3 resumable, 4 complete with
        warnings, 2 configuration error, 1 other failure)
    """
    options = get_options(argv)
    if options.version:
        print('chris_osprey_mission version: {}'.format(__version__))
        return 0

    Logger.LEVEL = LoggerLevel.from_name(options.logger_threshold)
    Logger.get_logger().set_level(Logger.LEVEL)

    try:
        if options.command == 'run':
            return run_mission(_configured(options), options.out).status.value
        if options.command == 'resume':
            overrides = {'battery_budget': options.battery} if options.battery is not None else None
            return resume_mission(options.session, overrides, options.out).status.value
        if options.command == 'scripted':
            waypoints = read_yaml_document(options.waypoints).get('waypoints') or []
            return run_scripted(_configured(options), waypoints, options.out).status.value
        if options.command == 'eval':
            config = _mission_config(options.mission)
            threshold = options.threshold if options.threshold is not None else config.coverage_threshold
            metrics = evaluate(options.mission, options.scene, threshold, config.accuracy_cap,
                               config.ground_truth_density, config.seed, config.control)
            Logger.get_logger().log(LoggerLevel.INFO, 'Coverage {:.2f} %.'.format(100.0 * metrics['coverage']['fraction']))
            return 0
        if options.command == 'export':
            for path in export(options.mission, options.format, options.target, options.scene):
                Logger.get_logger().log(LoggerLevel.INFO, 'Exported {}.'.format(path))
            return 0
    except (ValidationError, ParseError, FormatVersionMismatch) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Configuration error: {}'.format(ex))
        return EXIT_CONFIG_ERROR
    except Exception as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, '{} failed: {}'.format(options.command, ex))
        return EXIT_FAILURE
    return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
