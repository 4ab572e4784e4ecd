# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Ternary occupancy grid used for collision checking

Voxels are unknown, free or occupied. A scan marks the voxel of every
endpoint occupied and every voxel its ray passes through free; occupied
voxels are never cleared. Unknown voxels count as free for planning.
"""

import math
from enum import Enum, unique

import numpy as np
from scipy.spatial import cKDTree

from chris_osprey_core.exceptions import SessionIOError
from chris_osprey_core.utilities.logger import Logger, LoggerLevel

DEFAULT_VOXEL_EDGE = 0.5


@unique
class VoxelState(Enum):
    """
    State of one grid voxel
    """
    UNKNOWN = 0
    FREE = 1
    OCCUPIED = 2


class OccupancyGrid(object):
    """
    Dense voxel array covering an axis-aligned region

    The origin is snapped to a multiple of the voxel edge so grids built
    for overlapping regions share voxel boundaries.
    """

    def __init__(self, bounds_min, bounds_max, edge=DEFAULT_VOXEL_EDGE):
        """
        :param bounds_min: lower corner of the covered region (m)
        :param bounds_max: upper corner of the covered region (m)
        :param edge: voxel edge length (m)
        """
        if edge <= 0.0:
            raise ValueError('voxel edge must be positive, got {}'.format(edge))
        bounds_min = np.asarray(bounds_min, dtype=np.float64).reshape(3)
        bounds_max = np.asarray(bounds_max, dtype=np.float64).reshape(3)
        if np.any(bounds_max <= bounds_min):
            raise ValueError('grid bounds must have positive extent')
        self.edge = float(edge)
        self.origin = np.floor(bounds_min / self.edge) * self.edge
        self.shape = tuple(int(v) for v in np.maximum(np.ceil((bounds_max - self.origin) / self.edge), 1))
        self._states = np.zeros(self.shape, dtype=np.int8)
        self.revision = 0
        self._tree = None
        self._tree_revision = -1
        self._centers = None

    @property
    def states(self):
        """
        :return: read-only view of the voxel state values
        """
        view = self._states.view()
        view.flags.writeable = False
        return view

    @property
    def bounds_min(self):
        return self.origin.copy()

    @property
    def bounds_max(self):
        return self.origin + np.asarray(self.shape) * self.edge

    def voxel_index(self, points):
        """
        :param points: (N, 3) positions
        :return: (N, 3) int64 voxel indices (may lie outside the grid)
        """
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return np.floor((points - self.origin) / self.edge).astype(np.int64)

    def inside(self, indices):
        """
        :return: boolean mask of voxel indices within the grid
        """
        indices = np.asarray(indices).reshape(-1, 3)
        return np.all((indices >= 0) & (indices < np.asarray(self.shape)), axis=1)

    def voxel_center(self, indices):
        return self.origin + (np.asarray(indices, dtype=np.float64) + 0.5) * self.edge

    def state_at(self, position):
        """
        :return: VoxelState of the voxel holding position (UNKNOWN outside the grid)
        """
        index = self.voxel_index(position)
        if not self.inside(index)[0]:
            return VoxelState.UNKNOWN
        return VoxelState(int(self._states[tuple(index[0])]))

    def count(self, state):
        return int(np.count_nonzero(self._states == state.value))

    def occupied_centers(self):
        """
        :return: (M, 3) centers of occupied voxels in index order
        """
        return self.voxel_center(np.argwhere(self._states == VoxelState.OCCUPIED.value))

    def copy(self):
        """
        Snapshot used by the planner while the mission keeps integrating
        """
        other = OccupancyGrid.__new__(OccupancyGrid)
        other.edge = self.edge
        other.origin = self.origin.copy()
        other.shape = self.shape
        other._states = self._states.copy()
        other.revision = self.revision
        other._tree = self._tree
        other._tree_revision = self._tree_revision
        other._centers = self._centers
        return other

    def _occupied_tree(self):
        if self._tree_revision != self.revision:
            self._centers = self.occupied_centers()
            self._tree = cKDTree(self._centers) if len(self._centers) else None
            self._tree_revision = self.revision
        return self._tree, self._centers

    def valid_positions(self, positions, clearance):
        """
        Clearance-sphere test for many positions

        :param positions: (N, 3)
        :param clearance: sphere radius (m)
        :return: boolean array, True where no occupied voxel is closer than clearance
        """
        positions = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
        valid = np.ones(positions.shape[0], dtype=bool)
        tree, centers = self._occupied_tree()
        if tree is None or positions.shape[0] == 0:
            return valid
        half = 0.5 * self.edge
        reach = clearance + math.sqrt(3.0) * half
        limit = clearance * clearance
        for row, found in enumerate(tree.query_ball_point(positions, reach)):
            if not found:
                continue
            gap = np.maximum(np.abs(centers[found] - positions[row]) - half, 0.0)
            if np.any(np.einsum('ij,ij->i', gap, gap) < limit):
                valid[row] = False
        return valid

    def __eq__(self, other):
        return (isinstance(other, OccupancyGrid) and self.edge == other.edge and
                np.array_equal(self.origin, other.origin) and np.array_equal(self._states, other._states))

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __str__(self):
        return 'OccupancyGrid(edge={}, shape={}, occupied={}, free={})'.format(
            self.edge, self.shape, self.count(VoxelState.OCCUPIED), self.count(VoxelState.FREE))


def _traversed_voxels(start, end, edge_origin, edge):
    """
    Voxels crossed by each start->end segment, excluding the end voxel

    Amanatides-Woo traversal run for all rays at once.

    :param start: 3-vector shared by all segments
    :param end: (M, 3) segment ends
    :return: (K, 3) int64 voxel indices (with repeats)
    """
    start = (np.asarray(start, dtype=np.float64) - edge_origin) / edge
    end = (end - edge_origin) / edge
    direction = end - start
    current = np.tile(np.floor(start).astype(np.int64), (end.shape[0], 1))
    last = np.floor(end).astype(np.int64)
    step = np.sign(direction).astype(np.int64)
    with np.errstate(divide='ignore', invalid='ignore'):
        t_delta = np.where(direction != 0.0, 1.0 / np.abs(direction), np.inf)
        boundary = np.where(step > 0, current + 1, current).astype(np.float64)
        t_max = np.where(direction != 0.0, (boundary - start) / direction, np.inf)

    active = np.any(current != last, axis=1)
    steps = int(np.max(np.sum(np.abs(last - current), axis=1), initial=0)) + 1
    visited = []
    for _ in range(steps):
        rows = np.nonzero(active)[0]
        if rows.size == 0:
            break
        visited.append(current[rows].copy())
        axis = np.argmin(t_max[rows], axis=1)
        reached = t_max[rows, axis] <= 1.0
        rows, axis = rows[reached], axis[reached]
        current[rows, axis] += step[rows, axis]
        t_max[rows, axis] += t_delta[rows, axis]
        active[:] = False
        active[rows] = np.any(current[rows] != last[rows], axis=1)
    if not visited:
        return np.zeros((0, 3), dtype=np.int64)
    return np.concatenate(visited, axis=0)


def integrate_scan(grid, cloud, origin):
    """
    Ray-trace a registered scan into the grid

    :param grid: OccupancyGrid (updated in place)
    :param cloud: PointCloud or (N, 3) array in the map frame
    :param origin: sensor position (3-vector, finite)
    :return: the grid
    """
    origin = np.asarray(origin, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(origin)):
        raise ValueError('sensor origin must be finite')
    points = cloud.points if hasattr(cloud, 'points') else np.asarray(cloud, dtype=np.float64).reshape(-1, 3)
    if points.shape[0] == 0:
        return grid

    before = grid._states.copy()
    ends = grid.voxel_index(points)
    ends = ends[grid.inside(ends)]
    grid._states[ends[:, 0], ends[:, 1], ends[:, 2]] = VoxelState.OCCUPIED.value

    passed = _traversed_voxels(origin, points, grid.origin, grid.edge)
    passed = passed[grid.inside(passed)]
    if passed.shape[0]:
        cells = (passed[:, 0], passed[:, 1], passed[:, 2])
        keep = grid._states[cells] != VoxelState.OCCUPIED.value
        grid._states[cells[0][keep], cells[1][keep], cells[2][keep]] = VoxelState.FREE.value

    if not np.array_equal(before, grid._states):
        grid.revision += 1
    Logger.get_logger().log(LoggerLevel.DEBUG, 'Grid integrated {} points: {}'.format(points.shape[0], grid))
    return grid


def is_state_valid(grid, state, clearance):
    """
    :param grid: OccupancyGrid
    :param state: PlanState or 3-vector position
    :param clearance: sphere radius (m)
    :return: True iff no occupied voxel intersects the clearance sphere
    """
    position = state.position if hasattr(state, 'position') else state
    return bool(grid.valid_positions(position, clearance)[0])


def export_occupied(grid, file_path):
    """
    Write occupied voxel centers as text, one 'x y z' row per voxel

    :raises SessionIOError: if the file cannot be written
    """
    centers = grid.occupied_centers()
    try:
        with open(file_path, 'w') as fout:
            fout.write('# occupied voxel centers, edge {}\n'.format(grid.edge))
            for center in centers:
                fout.write('{:.4f} {:.4f} {:.4f}\n'.format(*center))
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to write grid export {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))
    return len(centers)
