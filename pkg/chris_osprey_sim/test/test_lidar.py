# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

import numpy as np
import pytest

from chris_osprey_core.exceptions import ValidationError
from chris_osprey_core.geometry.point_cloud import transform_cloud
from chris_osprey_core.geometry.pose import Pose
from chris_osprey_sim.lidar import SensorModel, cast_rays, simulate_scan
from chris_osprey_sim.scene import Scene, box_triangles


def open_scene(triangles=(), ground_plane=True):
    return Scene(np.asarray(triangles, dtype=np.float64).reshape(-1, 3, 3), ground_plane,
                 (-100, -100, 0), (100, 100, 50), Pose.identity())


def test_defaults_match_payload_sensor():
    model = SensorModel()
    assert (model.horizontal_fov, model.vertical_fov) == (360.0, 104.2)
    assert (model.horizontal_resolution, model.vertical_resolution) == (600, 64)
    assert model.max_range == 20.0 and model.scan_rate == 10.0
    assert model.horizontal_step == pytest.approx(0.6)
    assert model.vertical_step == pytest.approx(104.2 / 63)
    elevations = np.degrees(model.elevations())
    assert np.allclose(np.diff(elevations), 104.2 / 63)
    assert elevations[0] == pytest.approx(-52.1) and elevations[-1] == pytest.approx(52.1)


def test_rejects_bad_model():
    with pytest.raises(ValidationError):
        SensorModel(max_range=0.0)


def test_plane_ranges_follow_closed_form():
    model = SensorModel(horizontal_resolution=120, vertical_resolution=32)
    cloud = simulate_scan(open_scene(), Pose.from_translation((0.0, 0.0, 10.0)), model, seed=1)
    assert len(cloud) > 0
    ranges = np.linalg.norm(cloud.points, axis=1)
    cosine = -cloud.points[:, 2] / ranges
    assert np.max(np.abs(ranges - 10.0 / cosine)) < 1e-6
    assert np.allclose(cloud.points[:, 2], -10.0)


def test_empty_scene_and_out_of_range_plane():
    model = SensorModel(horizontal_resolution=60, vertical_resolution=16)
    assert len(simulate_scan(open_scene(ground_plane=False), Pose.identity(), model, seed=0)) == 0
    far_wall = box_triangles((25.0, -500.0, -500.0), (26.0, 500.0, 500.0))
    cloud = simulate_scan(open_scene(far_wall, ground_plane=False), Pose.identity(), model, seed=0)
    assert len(cloud) == 0


def test_points_lie_on_scene_and_scans_repeat(box_scene_file):
    from chris_osprey_sim.scene import load_scene
    scene = load_scene(box_scene_file)
    model = SensorModel(horizontal_resolution=180, vertical_resolution=24, range_noise_sigma=0.01)
    pose = Pose.from_xyz_yaw(-4.0, 5.0, 3.0, 0.3)
    first = simulate_scan(scene, pose, model, seed=11)
    assert first == simulate_scan(scene, pose, model, seed=11)
    world = transform_cloud(first, pose).points
    on_ground = np.abs(world[:, 2]) <= 3 * 0.01 + 1e-6
    inside = np.all((world >= -0.03 - 1e-6) & (world <= np.array([10, 10, 5]) + 0.03 + 1e-6), axis=1)
    near_face = np.min(np.abs(np.concatenate([world, world - np.array([10, 10, 5])], axis=1)), axis=1) <= 0.03 + 1e-6
    assert np.all(on_ground | (inside & near_face))


def test_scan_ordering_is_by_vertical_then_horizontal():
    model = SensorModel(horizontal_resolution=8, vertical_resolution=5, vertical_fov=80.0)
    cloud = simulate_scan(open_scene(), Pose.from_translation((0.0, 0.0, 2.0)), model, seed=0)
    elevation = np.arcsin(cloud.points[:, 2] / np.linalg.norm(cloud.points, axis=1))
    assert np.all(np.diff(elevation) >= -1e-12)


def test_mesh_hits_are_first_along_each_ray():
    wall = box_triangles((5.0, -50.0, -50.0), (6.0, 50.0, 50.0))
    scene = open_scene(wall, ground_plane=False)
    azimuth = np.radians(np.linspace(-60.0, 60.0, 25))
    directions = np.column_stack([np.cos(azimuth), np.sin(azimuth), np.zeros(25)])
    away = -directions
    distance = cast_rays(scene, (0.0, 0.0, 1.0), np.vstack([directions, away]))
    assert np.allclose(distance[:25], 5.0 / np.cos(azimuth), atol=1e-7)
    assert np.all(np.isinf(distance[25:]))


def test_ground_and_mesh_take_the_nearer_hit():
    block = box_triangles((3.0, -1.0, 0.0), (4.0, 1.0, 2.0))
    scene = open_scene(block)
    slope = np.array([[1.0, 0.0, -0.1], [1.0, 0.0, -1.0]])
    slope /= np.linalg.norm(slope, axis=1)[:, None]
    distance = cast_rays(scene, (0.0, 0.0, 1.0), slope)
    # the shallow ray meets the block face, the steep one the ground
    assert distance[0] == pytest.approx(3.0 * np.sqrt(1.01), abs=1e-7)
    assert distance[1] == pytest.approx(np.sqrt(2.0), abs=1e-7)
