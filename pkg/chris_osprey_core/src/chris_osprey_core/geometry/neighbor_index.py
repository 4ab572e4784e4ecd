# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Immutable spatial index for radius and k-nearest queries

The kd-tree returns candidates; final membership and ordering are decided
from distances computed with numpy, so results equal an exhaustive scan
of the same points exactly.
"""

import numpy as np
from scipy.spatial import cKDTree

# Candidate radius slack so kd-tree rounding never drops a boundary point
_SLACK_RELATIVE = 1e-9
_SLACK_ABSOLUTE = 1e-12


def _distances(points, center):
    return np.linalg.norm(points - center, axis=1)


class NeighborIndex(object):
    """
    Spatial index over a fixed array of points
    """

    def __init__(self, points):
        """
        :param points: array-like (N, 3) or a PointCloud
        """
        if hasattr(points, 'points'):
            points = points.points
        self._points = np.array(points, dtype=np.float64).reshape(-1, 3)
        self._points.flags.writeable = False
        self._tree = cKDTree(self._points) if self._points.shape[0] else None

    @property
    def points(self):
        return self._points

    @property
    def tree(self):
        """
        :return: the underlying cKDTree (None when empty) for approximate candidate searches
        """
        return self._tree

    def __len__(self):
        return self._points.shape[0]

    def _candidates(self, center, radius):
        slack = radius * (1.0 + _SLACK_RELATIVE) + _SLACK_ABSOLUTE
        return np.asarray(self._tree.query_ball_point(center, slack), dtype=np.int64)

    def radius_query(self, center, radius):
        """
        :param center: 3-vector
        :param radius: search radius in meters (> 0)
        :return: sorted list of point indices within radius (inclusive)
        """
        if self._tree is None:
            return []
        center = np.asarray(center, dtype=np.float64).reshape(3)
        candidates = self._candidates(center, radius)
        if candidates.size == 0:
            return []
        keep = candidates[_distances(self._points[candidates], center) <= radius]
        return sorted(int(i) for i in keep)

    def radius_query_many(self, centers, radius):
        """
        Batched radius_query

        :param centers: array-like (M, 3)
        :return: list of M sorted index arrays (int64)
        """
        centers = np.asarray(centers, dtype=np.float64).reshape(-1, 3)
        if self._tree is None:
            return [np.zeros(0, dtype=np.int64) for _ in range(centers.shape[0])]
        slack = radius * (1.0 + _SLACK_RELATIVE) + _SLACK_ABSOLUTE
        results = []
        for center, candidates in zip(centers, self._tree.query_ball_point(centers, slack)):
            candidates = np.asarray(candidates, dtype=np.int64)
            if candidates.size:
                candidates = candidates[_distances(self._points[candidates], center) <= radius]
                candidates.sort()
            results.append(candidates)
        return results

    def k_nearest(self, center, k):
        """
        :param center: 3-vector
        :param k: neighbour count (>= 1)
        :return: list of (index, distance) ascending by distance, ties by lowest index
        """
        if self._tree is None or k < 1:
            return []
        center = np.asarray(center, dtype=np.float64).reshape(3)
        count = min(int(k), self._points.shape[0])
        distances, _ = self._tree.query(center, k=count)
        kth = float(np.max(np.atleast_1d(distances)))
        candidates = self._candidates(center, kth)
        exact = _distances(self._points[candidates], center)
        order = np.lexsort((candidates, exact))[:count]
        return [(int(candidates[i]), float(exact[i])) for i in order]

    def nearest(self, queries, max_distance=np.inf):
        """
        Nearest point for each query (used by ICP and the map metrics)

        :param queries: array-like (M, 3)
        :param max_distance: matches farther than this report index -1
        :return: (distances, indices); distances inf where unmatched
        """
        queries = np.asarray(queries, dtype=np.float64).reshape(-1, 3)
        if self._tree is None:
            return np.full(queries.shape[0], np.inf), np.full(queries.shape[0], -1, dtype=np.int64)
        distances, indices = self._tree.query(queries, k=1, distance_upper_bound=max_distance)
        matched = np.isfinite(distances)
        indices = np.where(matched, indices, -1).astype(np.int64)
        distances = np.full(queries.shape[0], np.inf)
        distances[matched] = _distances(self._points[indices[matched]], queries[matched])
        return distances, indices
