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
from scipy.spatial.transform import Rotation

from chris_osprey_core.exceptions import ValidationError
from chris_osprey_core.geometry.pose import Pose, compose, inverse, relative, wrap_angle, interpolate_yaw


def random_pose(rng):
    return Pose(Rotation.random(random_state=int(rng.integers(0, 2 ** 31))).as_quat(), rng.uniform(-50, 50, 3))


def test_identity_composition():
    result = compose(Pose.identity(), Pose.identity())
    assert result.is_close(Pose.identity(), 1e-12, 1e-12)


def test_compose_with_inverse_is_identity(rng):
    for _ in range(200):
        pose = random_pose(rng)
        identity = compose(pose, inverse(pose))
        assert np.linalg.norm(identity.translation) < 1e-9
        assert identity.rotation_angle < 1e-9


def test_pure_translations_add():
    result = compose(Pose.from_translation((1.0, 0.0, 0.0)), Pose.from_translation((0.0, 2.0, 0.0)))
    assert np.allclose(result.translation, (1.0, 2.0, 0.0))


def test_compose_applies_right_operand_first():
    yaw = Pose.from_xyz_yaw(0.0, 0.0, 0.0, math.pi / 2)
    shift = Pose.from_translation((1.0, 0.0, 0.0))
    assert np.allclose(compose(yaw, shift).translation, (0.0, 1.0, 0.0))
    assert np.allclose(compose(shift, yaw).translation, (1.0, 0.0, 0.0))


def test_quaternion_stays_normalized_along_long_chain(rng):
    pose = Pose.identity()
    for _ in range(5000):
        pose = compose(pose, Pose.from_rotvec(rng.normal(0, 0.3, 3), rng.normal(0, 1, 3)))
        assert abs(np.linalg.norm(pose.quaternion) - 1.0) < 1e-9


def test_associativity(rng):
    for _ in range(100):
        a, b, c = random_pose(rng), random_pose(rng), random_pose(rng)
        assert compose(compose(a, b), c).is_close(compose(a, compose(b, c)), 1e-9, 1e-9)


def test_chain_decompose_and_recompose(rng):
    chain = [random_pose(rng) for _ in range(50)]
    absolute = [chain[0]]
    for pose in chain[1:]:
        absolute.append(compose(absolute[-1], pose))
    rebuilt = absolute[0]
    for previous, current in zip(absolute[:-1], absolute[1:]):
        rebuilt = compose(rebuilt, relative(previous, current))
    assert rebuilt.is_close(absolute[-1], 1e-9, 1e-9)


def test_matrix_agrees_with_scipy(rng):
    for _ in range(50):
        pose = random_pose(rng)
        assert np.allclose(pose.rotation_matrix, pose.rotation.as_matrix(), atol=1e-12)


def test_transform_preserves_pairwise_distances(rng):
    points = rng.uniform(-10, 10, (200, 3))
    moved = random_pose(rng).transform_points(points)
    before = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    after = np.linalg.norm(moved[:, None, :] - moved[None, :, :], axis=2)
    assert np.max(np.abs(before - after)) < 1e-9


def test_yaw_and_list_round_trip():
    pose = Pose.from_xyz_yaw(1.0, 2.0, 3.0, 0.75)
    assert pose.yaw == pytest.approx(0.75)
    assert Pose.from_list(pose.to_list()) == pose


def test_invalid_inputs_rejected():
    with pytest.raises(ValidationError):
        Pose((0.0, 0.0, 0.0, 0.0))
    with pytest.raises(ValidationError):
        Pose(None, (np.nan, 0.0, 0.0))


def test_angle_helpers():
    assert wrap_angle(2.5 * math.pi) == pytest.approx(0.5 * math.pi)
    assert interpolate_yaw(math.pi - 0.2, -math.pi + 0.2, 0.25) == pytest.approx(math.pi - 0.1)
