# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Map quality and mission efficiency metrics

Coverage is measured on the points of the combined (reference) map: a
point is covered when the evaluated map has a point within the threshold.
Accuracy is the mean distance from reference points to their nearest
evaluated point, counting only matches within the cap so regions the
mission never observed do not dominate the mean; the matched fraction is
reported alongside.
"""

import math

import numpy as np

from chris_osprey_core.geometry.neighbor_index import NeighborIndex
from chris_osprey_core.geometry.point_cloud import PointCloud, concatenate
from chris_osprey_core.geometry.pose import compose, inverse
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_core.utilities.utility import write_yaml_document
from chris_osprey_mission.exceptions import EmptyInput, LengthMismatch, MalformedLog, NoMatches

METRICS_FORMAT_VERSION = 1
# Slack added to tree query bounds; the comparison itself uses the exact distance
_QUERY_SLACK = 1e-9


def _points(cloud):
    return cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64).reshape(-1, 3)


def _nearest_distances(queries, reference, bound):
    """
    :return: distance from every query to its nearest reference point (inf beyond bound)
    """
    distances, _ = NeighborIndex(reference).nearest(queries, bound + _QUERY_SLACK)
    return distances


class CoverageReport(object):
    """
    Covered fraction of a combined map
    """

    def __init__(self, covered, threshold):
        """
        :param covered: boolean mask over the combined-map points
        :param threshold: match distance (m)
        """
        self.covered = np.asarray(covered, dtype=bool)
        self.threshold = float(threshold)

    @property
    def fraction(self):
        return float(np.count_nonzero(self.covered)) / self.covered.size

    def to_dict(self):
        return {'fraction': self.fraction, 'threshold': self.threshold, 'points': int(self.covered.size)}

    def __repr__(self):
        return 'CoverageReport({:.2f} % of {} points within {} m)'.format(
            100.0 * self.fraction, self.covered.size, self.threshold)


class AccuracyReport(object):
    """
    Mean nearest-neighbour distance of the matched reference points
    """

    def __init__(self, mean_distance, matched, cap):
        self.mean_distance = float(mean_distance)
        self.matched = np.asarray(matched, dtype=bool)
        self.cap = float(cap)

    @property
    def matched_fraction(self):
        return float(np.count_nonzero(self.matched)) / self.matched.size

    def to_dict(self):
        return {'mean_distance': self.mean_distance, 'matched_fraction': self.matched_fraction, 'cap': self.cap}

    def __repr__(self):
        return 'AccuracyReport({:.4f} m, {:.2f} % matched within {} m)'.format(
            self.mean_distance, 100.0 * self.matched_fraction, self.cap)


def coverage(individual, combined, threshold=0.10):
    """
    :param individual: evaluated map (PointCloud or (N, 3) array)
    :param combined: combined or ground-truth map
    :param threshold: match distance (m)
    :return: CoverageReport over the combined-map points
    :raises EmptyInput: when either map is empty
    """
    individual = _points(individual)
    combined = _points(combined)
    if individual.shape[0] == 0 or combined.shape[0] == 0:
        raise EmptyInput('coverage needs two non-empty maps')
    distances = _nearest_distances(combined, individual, threshold)
    return CoverageReport(distances <= threshold, threshold)


def accuracy(reference, test, cap=1.0):
    """
    :param reference: reference map
    :param test: evaluated map
    :param cap: matches farther than this are excluded (m)
    :return: AccuracyReport
    :raises EmptyInput: when either map is empty
    :raises NoMatches: when no reference point has a match within the cap
    """
    reference = _points(reference)
    test = _points(test)
    if reference.shape[0] == 0 or test.shape[0] == 0:
        raise EmptyInput('accuracy needs two non-empty maps')
    distances = _nearest_distances(reference, test, cap)
    matched = distances <= cap
    if not np.any(matched):
        raise NoMatches(cap)
    return AccuracyReport(np.mean(distances[matched]), matched, cap)


def combine_maps(clouds):
    """
    :param clouds: individual maps
    :return: their union as one PointCloud
    :raises EmptyInput: when no map is given
    """
    clouds = [cloud if isinstance(cloud, PointCloud) else PointCloud(cloud) for cloud in clouds]
    if not clouds:
        raise EmptyInput('combine_maps needs at least one map')
    return concatenate(clouds)


def compare_maps(evaluated, reference, threshold=0.10):
    """
    Split a map into the points that have a match in another map and those that do not

    :return: (covered PointCloud, uncovered PointCloud) of the evaluated map;
        every point is uncovered when the reference is empty
    """
    points = _points(evaluated)
    if points.shape[0] == 0 or _points(reference).shape[0] == 0:
        return PointCloud(), PointCloud(points)
    report = coverage(reference, evaluated, threshold)
    return PointCloud(points[report.covered]), PointCloud(points[~report.covered])


def ground_truth_cloud(scene, density=100.0, seed=0):
    """
    Area-weighted uniform sampling of every observable scene surface

    :param scene: Scene
    :param density: points per square meter
    :param seed: sampling seed
    :return: PointCloud
    """
    return PointCloud(scene.sample_surface(density, seed))


class MissionStats(object):
    """
    Distance and time accounting of a mission, summed over its flights
    """
    FIELDS = ('travel_distance', 'mission_time', 'airborne_time', 'average_speed', 'view_planning_time',
              'path_planning_time', 'view_planning_fraction', 'path_planning_fraction', 'flights')

    def __init__(self, travel_distance=0.0, mission_time=0.0, airborne_time=0.0, view_planning_time=0.0,
                 path_planning_time=0.0, flights=0):
        self.travel_distance = float(travel_distance)
        self.mission_time = float(mission_time)
        self.airborne_time = float(airborne_time)
        self.view_planning_time = float(view_planning_time)
        self.path_planning_time = float(path_planning_time)
        self.flights = int(flights)

    @property
    def average_speed(self):
        return self.travel_distance / self.airborne_time if self.airborne_time > 0.0 else 0.0

    @property
    def view_planning_fraction(self):
        return self.view_planning_time / self.mission_time if self.mission_time > 0.0 else 0.0

    @property
    def path_planning_fraction(self):
        return self.path_planning_time / self.mission_time if self.mission_time > 0.0 else 0.0

    def to_dict(self):
        return {key: self.__getattribute__(key) for key in self.FIELDS}

    def __str__(self):
        rows = ['  ' + 15 * '-', '   Mission Stats :']
        rows.extend('        {} : {}'.format(key, self.__getattribute__(key)) for key in self.FIELDS)
        return '\n'.join(rows)


def _field(entry, key):
    try:
        return entry[key]
    except KeyError:
        raise MalformedLog('{} record seq {} has no {}'.format(entry.get('event'), entry.get('seq'), key))


def trajectory_stats(records):
    """
    Replay a mission log into distance and time totals

    Distance is the sum of per-tick true displacements from each flight's
    start position plus the logged landing legs; airborne time sums the
    flight durations; planning buckets sum the view_planning and
    path_planning durations.

    :param records: mission log records in log order
    :return: MissionStats
    :raises MalformedLog: out-of-order records or ticks outside a flight
    """
    stats = MissionStats()
    previous = None
    position = None
    started = None
    first_start = None
    last_end = None
    for entry in records:
        t = _field(entry, 't')
        if previous is not None and t < previous:
            raise MalformedLog('record seq {} goes back in time'.format(entry.get('seq')))
        previous = t
        event = entry.get('event')
        if event == 'flight_start':
            if started is not None:
                raise MalformedLog('flight started at t={} while airborne'.format(t))
            started = t
            first_start = t if first_start is None else first_start
            position = np.asarray(_field(entry, 'position'), dtype=np.float64)
            stats.flights += 1
        elif event == 'tick':
            if started is None:
                raise MalformedLog('tick at t={} outside a flight'.format(t))
            current = np.asarray(_field(entry, 'position'), dtype=np.float64)
            stats.travel_distance += float(np.linalg.norm(current - position))
            position = current
        elif event == 'landing':
            if started is None:
                raise MalformedLog('landing at t={} outside a flight'.format(t))
            stats.travel_distance += float(_field(entry, 'distance'))
        elif event == 'flight_end':
            if started is None:
                raise MalformedLog('flight ended at t={} without a start'.format(t))
            stats.airborne_time += t - started
            last_end = t
            started = None
        elif event == 'view_planning':
            stats.view_planning_time += float(_field(entry, 'duration'))
        elif event == 'path_planning':
            stats.path_planning_time += float(_field(entry, 'duration'))
    if started is not None:
        raise MalformedLog('flight started at t={} never ended'.format(started))
    if first_start is not None:
        stats.mission_time = last_end - first_start
    return stats


def trajectory_error(estimated, ground_truth):
    """
    Translation RMSE after aligning the first estimated pose on the first
    ground-truth pose; the aligned first pose is excluded from the mean

    :param estimated: sequence of Pose
    :param ground_truth: sequence of Pose at the same times
    :return: RMSE (m); 0 for a single pose
    :raises EmptyInput: empty sequences
    :raises LengthMismatch: sequences of different lengths
    """
    estimated = list(estimated)
    ground_truth = list(ground_truth)
    if len(estimated) != len(ground_truth):
        raise LengthMismatch(len(estimated), len(ground_truth))
    if not estimated:
        raise EmptyInput('trajectory_error needs at least one pose')
    if len(estimated) == 1:
        return 0.0
    alignment = compose(ground_truth[0], inverse(estimated[0]))
    errors = [np.linalg.norm(compose(alignment, est).translation - truth.translation)
              for est, truth in zip(estimated[1:], ground_truth[1:])]
    return float(math.sqrt(np.mean(np.square(errors))))


def command_envelope_violations(records, cfg, tolerance=1e-9):
    """
    Replay the commanded velocities of a log against the control limits

    :param records: mission log records
    :param cfg: ControlConfig
    :param tolerance: numerical slack (m/s)
    :return: seq numbers of tick records whose command exceeds the speed cap
        or speeds up by more than acceleration * dt over the previous tick
    """
    violations = []
    speed = 0.0
    last_t = None
    for entry in records:
        if entry['event'] == 'flight_start':
            speed = 0.0
            last_t = entry['t']
            continue
        if entry['event'] != 'tick' or 'command' not in entry:
            continue
        command = np.asarray(entry['command'][:3], dtype=np.float64)
        current = float(np.linalg.norm(command))
        dt = entry['t'] - last_t if last_t is not None else cfg.period
        if current > cfg.max_velocity + tolerance or current - speed > cfg.acceleration * dt + tolerance:
            violations.append(entry['seq'])
        speed = current
        last_t = entry['t']
    return violations


def write_metrics_report(file_path, metrics):
    """
    Write a metrics report (key-value YAML)

    :param file_path: destination (e.g. metrics.txt)
    :param metrics: dict of plain values
    :raises SessionIOError: if the file cannot be written
    """
    document = dict(metrics)
    document['format_version'] = METRICS_FORMAT_VERSION
    write_yaml_document(file_path, document)
    Logger.get_logger().log(LoggerLevel.INFO, 'Metrics written to {}.'.format(file_path))
