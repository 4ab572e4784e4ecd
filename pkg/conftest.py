# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Shared pytest setup: every package's src/ on sys.path plus common fixtures
"""

import os
import sys

import numpy as np
import pytest

_ROOT = os.path.dirname(os.path.abspath(__file__))
for _package in ('chris_osprey_core', 'chris_osprey_sim', 'chris_osprey_slam',
                 'chris_osprey_planning', 'chris_osprey_mission'):
    _src = os.path.join(_ROOT, _package, 'src')
    if _src not in sys.path:
        sys.path.insert(0, _src)


def plane_patch(width, height, spacing, origin=(0.0, 0.0, 0.0), normal_axis=2):
    """
    Regular grid of points on an axis-aligned plane

    :param width: extent along the first in-plane axis (m)
    :param height: extent along the second in-plane axis (m)
    :param spacing: grid step (m)
    :param origin: corner of the patch
    :param normal_axis: axis index the plane is orthogonal to
    :return: (N, 3) array
    """
    u = np.arange(0.0, width + 1e-9, spacing)
    v = np.arange(0.0, height + 1e-9, spacing)
    uu, vv = np.meshgrid(u, v, indexing='ij')
    in_plane = [axis for axis in range(3) if axis != normal_axis]
    points = np.zeros((uu.size, 3))
    points[:, in_plane[0]] = uu.ravel()
    points[:, in_plane[1]] = vv.ravel()
    return points + np.asarray(origin, dtype=np.float64)


def structured_points(seed=0, count=3000):
    """
    Three orthogonal planar patches with a little clutter; well conditioned for ICP
    """
    rng = np.random.default_rng(seed)
    per = count // 4
    floor = np.column_stack([rng.uniform(-5, 5, per), rng.uniform(-5, 5, per), np.zeros(per)])
    wall_x = np.column_stack([np.full(per, 5.0), rng.uniform(-5, 5, per), rng.uniform(0, 4, per)])
    wall_y = np.column_stack([rng.uniform(-5, 5, per), np.full(per, 5.0), rng.uniform(0, 4, per)])
    box = np.column_stack([rng.uniform(-1, 1, per), rng.uniform(-3, -1, per), rng.uniform(0, 2, per)])
    box[:, 0] = np.where(rng.random(per) < 0.5, -1.0, 1.0)
    return np.concatenate([floor, wall_x, wall_y, box], axis=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def structured_cloud_points():
    return structured_points()


@pytest.fixture
def box_scene_file(tmp_path):
    """
    Scene file with a single 10 x 10 x 5 m box and a ground plane
    """
    from chris_osprey_sim.scene import write_box_obj, write_scene_file
    obj_path = str(tmp_path / 'box.obj')
    write_box_obj(obj_path, (0.0, 0.0, 0.0), (10.0, 10.0, 5.0))
    scene_path = str(tmp_path / 'scene.yaml')
    write_scene_file(scene_path, ['box.obj'], bounds_min=(-2.0, -2.0, 0.25), bounds_max=(12.0, 12.0, 8.0),
                     takeoff=(-1.0, -1.0, 0.0, 0.0), ground_plane=True)
    return scene_path


@pytest.fixture
def make_structured_points():
    return structured_points


@pytest.fixture
def make_plane_patch():
    return plane_patch
