# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Point cloud container and builder
"""

import numpy as np

from chris_osprey_core.exceptions import ValidationError


def quantize_float32(points):
    """
    Round coordinates to float32 precision (stored as float64) so that
    PLY and state files reproduce them exactly
    """
    return np.asarray(points, dtype=np.float32).astype(np.float64)


class PointCloud(object):
    """
    Immutable ordered set of 3D points captured by one scan (or aggregated)
    """
    __slots__ = ('_points', '_scan_id', '_timestamps')

    def __init__(self, points=None, scan_id=0, timestamps=None):
        """
        :param points: array-like (N, 3) in meters
        :param scan_id: source scan identity
        :param timestamps: optional per-point times (seconds)
        :raises ValidationError: on non-finite coordinates or shape mismatch
        """
        if points is None:
            points = np.zeros((0, 3))
        array = np.array(points, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(array)):
            raise ValidationError('point cloud contains non-finite coordinates')
        array.flags.writeable = False
        self._points = array
        self._scan_id = int(scan_id)
        if timestamps is not None:
            timestamps = np.array(timestamps, dtype=np.float64).reshape(-1)
            if timestamps.shape[0] != array.shape[0]:
                raise ValidationError('{} timestamps for {} points'.format(timestamps.shape[0], array.shape[0]))
            timestamps.flags.writeable = False
        self._timestamps = timestamps

    @property
    def points(self):
        return self._points

    @property
    def scan_id(self):
        return self._scan_id

    @property
    def timestamps(self):
        return self._timestamps

    def __len__(self):
        return self._points.shape[0]

    @property
    def is_empty(self):
        return self._points.shape[0] == 0

    def subset(self, indices):
        """
        :param indices: point indices to keep, in the order given
        :return: new PointCloud with the same scan id
        """
        indices = np.asarray(indices, dtype=np.int64)
        timestamps = None if self._timestamps is None else self._timestamps[indices]
        return PointCloud(self._points[indices], self._scan_id, timestamps)

    def with_scan_id(self, scan_id):
        return PointCloud(self._points, scan_id, self._timestamps)

    def __eq__(self, other):
        if not isinstance(other, PointCloud) or self._scan_id != other.scan_id:
            return False
        if (self._timestamps is None) != (other.timestamps is None):
            return False
        if self._timestamps is not None and not np.array_equal(self._timestamps, other.timestamps):
            return False
        return np.array_equal(self._points, other.points)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return 'PointCloud(scan_id={}, points={})'.format(self._scan_id, len(self))


class PointCloudBuilder(object):
    """
    Mutable accumulator used while capturing or aggregating clouds
    """

    def __init__(self, scan_id=0):
        self.scan_id = scan_id
        self._chunks = []

    def append(self, points):
        """
        :param points: array-like (N, 3)
        """
        chunk = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if chunk.shape[0]:
            self._chunks.append(chunk)

    def __len__(self):
        return sum(chunk.shape[0] for chunk in self._chunks)

    def build(self):
        """
        :return: PointCloud holding every appended point in order
        """
        if not self._chunks:
            return PointCloud(None, self.scan_id)
        return PointCloud(np.concatenate(self._chunks, axis=0), self.scan_id)


def transform_cloud(cloud, pose):
    """
    Rigidly map every point of a cloud

    :param cloud: PointCloud
    :param pose: Pose applied to each point
    :return: new PointCloud with the same count and scan id
    """
    timestamps = cloud.timestamps
    return PointCloud(pose.transform_points(cloud.points), cloud.scan_id, timestamps)


def concatenate(clouds, scan_id=0):
    """
    :param clouds: iterable of PointClouds
    :param scan_id: id of the aggregated cloud
    :return: PointCloud with the points of every input, in input order
    """
    builder = PointCloudBuilder(scan_id)
    for cloud in clouds:
        builder.append(cloud.points)
    return builder.build()
