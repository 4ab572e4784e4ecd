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
from scipy.spatial.distance import cdist

from chris_osprey_core.geometry.point_cloud import PointCloud
from chris_osprey_core.geometry.pose import Pose
from chris_osprey_core.utilities.utility import read_yaml_document
from chris_osprey_mission.evaluation import (MissionStats, accuracy, combine_maps, command_envelope_violations,
                                             compare_maps, coverage, ground_truth_cloud, trajectory_error,
                                             trajectory_stats, write_metrics_report)
from chris_osprey_mission.exceptions import EmptyInput, LengthMismatch, MalformedLog, NoMatches
from chris_osprey_planning.control import ControlConfig
from chris_osprey_sim.scene import load_scene


def _records(*entries):
    return [dict(entry, seq=seq) for seq, entry in enumerate(entries)]


# Coverage

def test_identical_maps_are_fully_covered(make_plane_patch):
    points = make_plane_patch(2.0, 2.0, 0.1)
    report = coverage(points, points, 0.01)
    assert report.fraction == 1.0
    assert report.to_dict()['points'] == len(points)


def test_half_map_covers_half(make_plane_patch):
    combined = make_plane_patch(0.9, 0.9, 0.1)
    individual = combined[combined[:, 0] < 0.45]
    assert coverage(individual, combined, 0.01).fraction == pytest.approx(0.5)


def test_coverage_matches_brute_force(rng):
    individual = rng.uniform(0.0, 2.0, (300, 3))
    combined = rng.uniform(0.0, 2.0, (400, 3))
    expected = np.min(cdist(combined, individual), axis=1) <= 0.2
    report = coverage(individual, combined, 0.2)
    assert np.array_equal(report.covered, expected)


def test_coverage_grows_with_threshold(rng):
    individual = rng.uniform(0.0, 2.0, (200, 3))
    combined = rng.uniform(0.0, 2.0, (200, 3))
    fractions = [coverage(individual, combined, threshold).fraction for threshold in (0.05, 0.1, 0.2, 0.4)]
    assert fractions == sorted(fractions)


def test_coverage_of_empty_map():
    with pytest.raises(EmptyInput):
        coverage(np.zeros((0, 3)), np.ones((4, 3)))
    with pytest.raises(EmptyInput):
        coverage(PointCloud(np.ones((4, 3))), PointCloud())


# Accuracy

def test_identical_maps_are_exact(make_plane_patch):
    points = make_plane_patch(2.0, 2.0, 0.1)
    report = accuracy(points, points)
    assert report.mean_distance == pytest.approx(0.0, abs=1e-9)
    assert report.matched_fraction == 1.0


def test_offset_along_normal(make_plane_patch):
    reference = make_plane_patch(2.0, 2.0, 0.05)
    test = reference + [0.0, 0.0, 0.05]
    assert accuracy(reference, test).mean_distance == pytest.approx(0.05, abs=1e-6)


def test_unmatched_region_is_excluded(make_plane_patch):
    patch = make_plane_patch(1.0, 1.0, 0.1)
    far = patch + [0.0, 0.0, 5.0]
    report = accuracy(np.concatenate([patch, far]), patch, cap=1.0)
    assert report.mean_distance == pytest.approx(0.0, abs=1e-9)
    assert report.matched_fraction == pytest.approx(0.5)


def test_no_match_within_cap():
    with pytest.raises(NoMatches):
        accuracy(np.zeros((3, 3)), np.full((3, 3), 10.0), cap=1.0)
    with pytest.raises(EmptyInput):
        accuracy(np.zeros((0, 3)), np.ones((3, 3)))


def test_accuracy_matches_brute_force(rng):
    reference = rng.uniform(0.0, 3.0, (300, 3))
    test = rng.uniform(0.0, 3.0, (250, 3))
    nearest = np.min(cdist(reference, test), axis=1)
    expected = np.mean(nearest[nearest <= 0.3])
    assert accuracy(reference, test, cap=0.3).mean_distance == pytest.approx(expected, rel=1e-6)


# Map helpers

def test_combine_and_compare(make_plane_patch):
    left = make_plane_patch(0.9, 0.9, 0.1)
    right = left + [5.0, 0.0, 0.0]
    combined = combine_maps([PointCloud(left), right])
    assert len(combined) == 2 * len(left)
    covered, uncovered = compare_maps(combined, left, 0.01)
    assert len(covered) == len(left)
    assert len(uncovered) == len(right)
    assert np.all(uncovered.points[:, 0] >= 5.0)
    with pytest.raises(EmptyInput):
        combine_maps([])


def test_ground_truth_density(box_scene_file):
    cloud = ground_truth_cloud(load_scene(box_scene_file), density=10.0, seed=1)
    # Top and four walls; the ground plane and the box floor are never observed
    assert len(cloud) == 3000
    assert np.all(cloud.points[:, 2] > 0.0)
    again = ground_truth_cloud(load_scene(box_scene_file), density=10.0, seed=1)
    assert np.array_equal(cloud.points, again.points)


# Mission statistics

def test_stationary_mission():
    records = _records({'t': 0.0, 'event': 'flight_start', 'position': [0.0, 0.0, 0.0]},
                       {'t': 0.02, 'event': 'tick', 'position': [0.0, 0.0, 0.0]},
                       {'t': 0.04, 'event': 'flight_end'})
    stats = trajectory_stats(records)
    assert stats.travel_distance == 0.0
    assert stats.average_speed == 0.0
    assert stats.flights == 1


def test_square_flight():
    corners = [[10.0, 0.0, 3.0], [10.0, 10.0, 3.0], [0.0, 10.0, 3.0], [0.0, 0.0, 3.0]]
    entries = [{'t': 0.0, 'event': 'flight_start', 'position': [0.0, 0.0, 3.0]},
               {'t': 1.0, 'event': 'view_planning', 'duration': 2.0}]
    entries.extend({'t': 10.0 * (i + 1), 'event': 'tick', 'position': corner} for i, corner in enumerate(corners))
    entries.extend([{'t': 40.0, 'event': 'path_planning', 'duration': 1.0},
                    {'t': 40.0, 'event': 'landing', 'distance': 3.0},
                    {'t': 50.0, 'event': 'flight_end'}])
    stats = trajectory_stats(_records(*entries))
    assert stats.travel_distance == pytest.approx(43.0)
    assert stats.airborne_time == pytest.approx(50.0)
    assert stats.mission_time == pytest.approx(50.0)
    assert stats.average_speed == pytest.approx(43.0 / 50.0)
    assert stats.view_planning_fraction == pytest.approx(0.04)
    assert stats.path_planning_fraction == pytest.approx(0.02)
    assert set(stats.to_dict()) == set(MissionStats.FIELDS)


def test_ground_time_counts_toward_mission_only():
    records = _records({'t': 0.0, 'event': 'flight_start', 'position': [0.0, 0.0, 0.0]},
                       {'t': 10.0, 'event': 'flight_end'},
                       {'t': 30.0, 'event': 'flight_start', 'position': [0.0, 0.0, 0.0]},
                       {'t': 40.0, 'event': 'flight_end'})
    stats = trajectory_stats(records)
    assert stats.flights == 2
    assert stats.airborne_time == pytest.approx(20.0)
    assert stats.mission_time == pytest.approx(40.0)


def test_malformed_replays():
    with pytest.raises(MalformedLog):
        trajectory_stats(_records({'t': 0.0, 'event': 'tick', 'position': [0.0, 0.0, 0.0]}))
    with pytest.raises(MalformedLog):
        trajectory_stats(_records({'t': 0.0, 'event': 'flight_start', 'position': [0.0, 0.0, 0.0]}))
    with pytest.raises(MalformedLog):
        trajectory_stats(_records({'t': 1.0, 'event': 'flight_start', 'position': [0.0, 0.0, 0.0]},
                                  {'t': 0.5, 'event': 'flight_end'}))
    with pytest.raises(MalformedLog):
        trajectory_stats(_records({'t': 0.0, 'event': 'flight_start'}))


# Trajectory error

def test_perfect_trajectory():
    poses = [Pose.from_xyz_yaw(i, 0.0, 3.0, 0.1 * i) for i in range(5)]
    assert trajectory_error(poses, poses) == pytest.approx(0.0, abs=1e-12)
    assert trajectory_error(poses[:1], [Pose.from_xyz_yaw(4.0, 4.0, 0.0, 1.0)]) == 0.0


def test_constant_offset_is_aligned_away():
    truth = [Pose.from_xyz_yaw(i, 0.0, 3.0, 0.0) for i in range(5)]
    estimated = [Pose.from_xyz_yaw(i, 0.1, 3.0, 0.0) for i in range(5)]
    assert trajectory_error(estimated, truth) == pytest.approx(0.0, abs=1e-9)


def test_growing_error():
    truth = [Pose.from_xyz_yaw(i, 0.0, 0.0, 0.0) for i in range(4)]
    estimated = [Pose.from_xyz_yaw(i, 0.0, float(i), 0.0) for i in range(4)]
    assert trajectory_error(estimated, truth) == pytest.approx(math.sqrt(14.0 / 3.0))


def test_trajectory_error_inputs():
    with pytest.raises(LengthMismatch):
        trajectory_error([Pose.identity()], [Pose.identity(), Pose.identity()])
    with pytest.raises(EmptyInput):
        trajectory_error([], [])


# Command envelope

def test_command_envelope():
    cfg = ControlConfig()
    entries = [{'t': 0.0, 'event': 'flight_start', 'position': [0.0, 0.0, 0.0]}]
    entries.extend({'t': 0.02 * i, 'event': 'tick', 'command': [0.002 * i, 0.0, 0.0, 0.0]} for i in range(1, 20))
    assert command_envelope_violations(_records(*entries), cfg) == []

    entries.append({'t': 0.40, 'event': 'tick', 'command': [0.5, 0.0, 0.0, 0.0]})
    entries.append({'t': 0.42, 'event': 'tick', 'command': [0.0, 1.5, 0.0, 0.0]})
    entries.append({'t': 0.44, 'event': 'tick', 'command': [0.0, 0.0, 0.0, 0.0]})
    assert command_envelope_violations(_records(*entries), cfg) == [20, 21]


def test_metrics_report(tmp_path):
    path = str(tmp_path / 'metrics.txt')
    write_metrics_report(path, {'coverage': {'fraction': 0.5}, 'trajectory_rmse': 0.1})
    document = read_yaml_document(path)
    assert document['format_version'] == 1
    assert document['coverage']['fraction'] == 0.5
