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

from chris_osprey_core.geometry.point_cloud import PointCloud
from chris_osprey_planning.occupancy_grid import (OccupancyGrid, VoxelState, export_occupied, integrate_scan,
                                                  is_state_valid)
from chris_osprey_planning.planner import PlanState


def _grid():
    return OccupancyGrid((-5.0, -5.0, -5.0), (15.0, 5.0, 5.0))


def test_origin_snaps_to_voxel_edge():
    grid = OccupancyGrid((-1.2, 0.3, 0.0), (2.0, 2.0, 2.0))
    assert np.array_equal(grid.origin, [-1.5, 0.0, 0.0])
    assert grid.shape == (7, 4, 4)


def test_single_point_along_x():
    grid = _grid()
    integrate_scan(grid, PointCloud([[5.25, 0.25, 0.25]]), (0.25, 0.25, 0.25))
    assert grid.count(VoxelState.OCCUPIED) == 1
    assert grid.count(VoxelState.FREE) == 10
    assert grid.state_at((5.25, 0.25, 0.25)) == VoxelState.OCCUPIED
    assert grid.state_at((2.25, 0.25, 0.25)) == VoxelState.FREE
    assert grid.state_at((0.25, 1.25, 0.25)) == VoxelState.UNKNOWN


def test_empty_cloud_leaves_grid_unchanged():
    grid = _grid()
    before = grid.copy()
    integrate_scan(grid, PointCloud(), (0.0, 0.0, 0.0))
    assert grid == before
    assert grid.revision == 0


def test_reintegration_is_idempotent(rng):
    grid = _grid()
    cloud = PointCloud(rng.uniform((-4.0, -4.0, -4.0), (14.0, 4.0, 4.0), size=(300, 3)))
    integrate_scan(grid, cloud, (0.1, 0.2, 0.3))
    first = grid.copy()
    integrate_scan(grid, cloud, (0.1, 0.2, 0.3))
    assert grid == first


def test_occupied_is_never_cleared():
    grid = _grid()
    integrate_scan(grid, PointCloud([[3.25, 0.25, 0.25]]), (0.25, 0.25, 0.25))
    # second ray passes straight through the occupied voxel
    integrate_scan(grid, PointCloud([[8.25, 0.25, 0.25]]), (0.25, 0.25, 0.25))
    assert grid.state_at((3.25, 0.25, 0.25)) == VoxelState.OCCUPIED
    assert grid.state_at((6.25, 0.25, 0.25)) == VoxelState.FREE


def test_traversal_covers_every_sampled_voxel(rng):
    grid = _grid()
    origin = np.array([0.13, -0.41, 0.77])
    ends = rng.uniform((-4.5, -4.5, -4.5), (14.5, 4.5, 4.5), size=(40, 3))
    for end in ends:
        integrate_scan(grid, PointCloud([end]), origin)
    states = grid.states
    for end in ends:
        samples = origin + np.linspace(0.0, 1.0, 20000)[:, None] * (end - origin)
        voxels = np.unique(grid.voxel_index(samples), axis=0)
        for voxel in voxels:
            assert states[tuple(voxel)] != VoxelState.UNKNOWN.value
    # every marked voxel touches one of the rays
    marked = np.argwhere(states != VoxelState.UNKNOWN.value)
    centers = grid.voxel_center(marked)
    direction = ends - origin
    reach = 0.5 * np.sqrt(3.0) * grid.edge + 1e-9
    for center in centers:
        along = np.clip(((center - origin) @ direction.T) / np.sum(direction ** 2, axis=1), 0.0, 1.0)
        nearest = origin + along[:, None] * direction
        assert np.min(np.linalg.norm(nearest - center, axis=1)) <= reach


def test_state_validity():
    grid = _grid()
    integrate_scan(grid, PointCloud([[5.25, 0.25, 0.25]]), (0.25, 0.25, 0.25))
    assert is_state_valid(grid, PlanState((0.25, 0.25, 0.25)), 1.0)
    assert not is_state_valid(grid, PlanState((5.25, 0.25, 0.25)), 1.0)
    # occupied voxel spans x in [5.0, 5.5]
    assert not is_state_valid(grid, PlanState((4.1, 0.25, 0.25)), 1.0)
    assert is_state_valid(grid, PlanState((3.9, 0.25, 0.25)), 1.0)
    assert is_state_valid(grid, (4.1, 0.25, 0.25), 0.8)


def test_unknown_space_is_free():
    grid = _grid()
    assert grid.valid_positions(np.zeros((5, 3)), 1.0).all()


def test_copy_is_a_snapshot():
    grid = _grid()
    snapshot = grid.copy()
    integrate_scan(grid, PointCloud([[5.25, 0.25, 0.25]]), (0.25, 0.25, 0.25))
    assert snapshot.count(VoxelState.OCCUPIED) == 0
    assert is_state_valid(snapshot, (5.25, 0.25, 0.25), 1.0)


def test_export_occupied(tmp_path):
    grid = _grid()
    integrate_scan(grid, PointCloud([[5.25, 0.25, 0.25], [2.75, -1.25, 3.25]]), (0.25, 0.25, 0.25))
    path = str(tmp_path / 'grid.txt')
    assert export_occupied(grid, path) == 2
    rows = [line for line in open(path).read().splitlines() if not line.startswith('#')]
    centers = np.array([[float(v) for v in row.split()] for row in rows])
    assert np.allclose(sorted(map(tuple, centers)), [(2.75, -1.25, 3.25), (5.25, 0.25, 0.25)])


def test_invalid_origin():
    with pytest.raises(ValueError):
        integrate_scan(_grid(), PointCloud([[1.0, 0.0, 0.0]]), (np.nan, 0.0, 0.0))
