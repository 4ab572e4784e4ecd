# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Scan-to-submap registration

A submap aggregates the clouds of nearby graph nodes (dense separation
close to the platform, sparse separation farther out) and is downsampled
to a fixed point budget; scans are aligned to it with point-to-point ICP.
"""

import numpy as np

from chris_osprey_core.base_metamodel import _ConfigMetamodel
from chris_osprey_core.geometry.neighbor_index import NeighborIndex
from chris_osprey_core.geometry.point_cloud import PointCloud, concatenate, transform_cloud
from chris_osprey_core.geometry.pose import Pose, compose
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_slam.exceptions import DegenerateGeometry, EmptySubmap

# Bisection steps used to pick the voxel edge
VOXEL_BISECTION_STEPS = 20
# Second singular value below this fraction of the first means collinear
_COLLINEAR_RATIO = 1e-6


class SubmapConfig(_ConfigMetamodel):
    """
    Submap assembly parameters
    """
    yaml_tag = u'!submap_config'
    HUMAN_OUTPUT_NAME = 'Submap Config'
    DEFAULTS = {
        'inclusion_radius': 25.0,
        'dense_radius': 4.0,
        'dense_separation': 0.25,
        'sparse_separation': 2.0,
        'target_point_count': 30000,
        'seed': 0,
    }

    def validate(self):
        self._require(0.0 < self.dense_radius < self.inclusion_radius,
                      'dense_radius must be positive and below inclusion_radius')
        self._require(self.dense_separation > 0.0 and self.sparse_separation > 0.0,
                      'separations must be positive')
        self._require(self.target_point_count >= 1, 'target_point_count must be at least 1')


class IcpConfig(_ConfigMetamodel):
    """
    ICP iteration limits, convergence thresholds and success criteria
    """
    yaml_tag = u'!icp_config'
    HUMAN_OUTPUT_NAME = 'ICP Config'
    DEFAULTS = {
        'max_iterations': 30,
        'translation_convergence': 0.01,
        'rotation_convergence': 0.001,
        'max_correspondence_distance': 1.0,
        'min_inliers': 500,
        'icp_module_stride': 3,
    }

    def validate(self):
        self._require(self.max_iterations >= 1, 'max_iterations must be at least 1')
        self._require(self.translation_convergence > 0.0 and self.rotation_convergence > 0.0,
                      'convergence thresholds must be positive')
        self._require(self.max_correspondence_distance > 0.0, 'max_correspondence_distance must be positive')
        self._require(self.min_inliers >= 0, 'min_inliers must be non-negative')
        self._require(self.icp_module_stride >= 1, 'icp_module_stride must be at least 1')


class IcpResult(object):
    """
    Outcome of one registration
    """

    def __init__(self, transform, converged, iterations, inlier_count, rms_residual, rms_history=None):
        """
        :param transform: Pose mapping source into the target frame
        :param converged: True when the last update was below both thresholds
        :param iterations: iterations used
        :param inlier_count: correspondences within the cap at the final transform
        :param rms_residual: RMS distance of those correspondences (m)
        :param rms_history: truncated RMS objective before each update and at the end
        """
        self.transform = transform
        self.converged = converged
        self.iterations = iterations
        self.inlier_count = inlier_count
        self.rms_residual = rms_residual
        self.rms_history = list(rms_history or [])

    def succeeded(self, min_inliers):
        """
        :return: converged and at least min_inliers correspondences
        """
        return self.converged and self.inlier_count >= min_inliers

    def to_record(self):
        """
        :return: plain dict for the mission log
        """
        return {'converged': bool(self.converged), 'iterations': int(self.iterations),
                'inliers': int(self.inlier_count), 'rms': float(self.rms_residual),
                'transform': self.transform.to_list()}

    def __repr__(self):
        return 'IcpResult(converged={}, iterations={}, inliers={}, rms={:.5f})'.format(
            self.converged, self.iterations, self.inlier_count, self.rms_residual)


def _voxel_keys(points, origin, edge):
    return np.floor((points - origin) / edge).astype(np.int64)


def _group_by_voxel(keys):
    """
    :return: (order, starts) grouping point indices by voxel key
    """
    order = np.lexsort((keys[:, 2], keys[:, 1], keys[:, 0]))
    ordered = keys[order]
    change = np.any(ordered[1:] != ordered[:-1], axis=1)
    starts = np.concatenate([[0], np.nonzero(change)[0] + 1])
    return order, starts


def _occupied_voxels(points, origin, edge):
    return len(_group_by_voxel(_voxel_keys(points, origin, edge))[1])


def _voxel_representatives(points, origin, edge):
    """
    Index of the point nearest each occupied voxel's centroid (ties by lowest index)
    """
    order, starts = _group_by_voxel(_voxel_keys(points, origin, edge))
    voxel_of = np.zeros(len(points), dtype=np.int64)
    voxel_of[order] = np.repeat(np.arange(len(starts)), np.diff(np.append(starts, len(points))))
    counts = np.bincount(voxel_of)
    centroids = np.column_stack([np.bincount(voxel_of, weights=points[:, axis]) for axis in range(3)])
    centroids /= counts[:, None]
    distance = np.linalg.norm(points - centroids[voxel_of], axis=1)
    ranked = np.lexsort((np.arange(len(points)), distance, voxel_of))
    first = np.concatenate([[True], voxel_of[ranked][1:] != voxel_of[ranked][:-1]])
    return np.sort(ranked[first])


def downsample(cloud, target, seed):
    """
    Reduce a cloud to exactly target points

    :param cloud: PointCloud
    :param target: point budget (>= 1)
    :param seed: seed of the final random trim
    :return: the cloud itself when small enough, else a subset of exactly target points
    """
    count = len(cloud)
    if count <= target:
        return cloud
    points = cloud.points
    origin = points.min(axis=0)
    extent = float(np.max(points.max(axis=0) - origin))
    low, high = 0.0, extent * (1.0 + 1e-9) + 1e-9
    for _ in range(VOXEL_BISECTION_STEPS):
        middle = 0.5 * (low + high)
        if _occupied_voxels(points, origin, middle) >= target:
            low = middle
        else:
            high = middle
    if target == 1:
        low = high
    keep = np.arange(count) if low == 0.0 else _voxel_representatives(points, origin, low)
    if len(keep) > target:
        rng = np.random.default_rng(seed)
        keep = np.sort(keep[rng.choice(len(keep), size=target, replace=False)])
    return cloud.subset(keep)


def select_submap_nodes(nodes, current, cfg):
    """
    Greedy node selection in node order

    :param nodes: list of (Pose, PointCloud)
    :param current: current Pose
    :param cfg: SubmapConfig
    :return: indices of the selected nodes
    """
    selected = []
    for index, (pose, _) in enumerate(nodes):
        distance = pose.distance_to(current)
        if distance > cfg.inclusion_radius:
            continue
        separation = cfg.dense_separation if distance <= cfg.dense_radius else cfg.sparse_separation
        if any(pose.distance_to(nodes[other][0]) < separation for other in selected):
            continue
        selected.append(index)
    return selected


def build_submap(nodes, current, cfg, seed=None):
    """
    Assemble the registration target around the current pose

    :param nodes: list of (Pose, PointCloud in its sensor frame), poses in a common frame
    :param current: current Pose in that frame
    :param cfg: SubmapConfig
    :param seed: trim seed (defaults to cfg.seed)
    :return: PointCloud in the common frame with at most cfg.target_point_count points
    :raises EmptySubmap: when no node qualifies
    """
    selected = select_submap_nodes(nodes, current, cfg)
    if not selected:
        raise EmptySubmap('no node within {} m of ({:.2f}, {:.2f}, {:.2f})'.format(
            cfg.inclusion_radius, *current.translation))
    merged = concatenate([transform_cloud(nodes[i][1], nodes[i][0]) for i in selected])
    Logger.get_logger().log(LoggerLevel.DEBUG, 'Submap from {} nodes, {} points.'.format(len(selected), len(merged)))
    return downsample(merged, cfg.target_point_count, cfg.seed if seed is None else seed)


def kabsch(source, target):
    """
    Least-squares rigid transform mapping source[i] onto target[i]

    :param source: (N, 3)
    :param target: (N, 3)
    :return: Pose
    """
    source_center = source.mean(axis=0)
    target_center = target.mean(axis=0)
    covariance = (source - source_center).T.dot(target - target_center)
    u, _, vt = np.linalg.svd(covariance)
    rotation = vt.T.dot(u.T)
    if np.linalg.det(rotation) < 0.0:
        vt[-1, :] *= -1.0
        rotation = vt.T.dot(u.T)
    return Pose.from_matrix(rotation, target_center - rotation.dot(source_center))


def _is_collinear(points):
    if len(points) < 3:
        return True
    singular = np.linalg.svd(points - points.mean(axis=0), compute_uv=False)
    return singular[0] == 0.0 or singular[1] <= _COLLINEAR_RATIO * singular[0]


def _truncated_rms(distances, cap, count):
    clipped = np.minimum(distances, cap)
    return float(np.sqrt(np.sum(clipped * clipped) / count))


def icp_register(source, target, prior, cfg, target_index=None):
    """
    Point-to-point ICP

    :param source: PointCloud to align
    :param target: PointCloud to align to
    :param prior: initial Pose mapping source into the target frame
    :param cfg: IcpConfig
    :param target_index: optional prebuilt NeighborIndex over target
    :return: IcpResult
    :raises DegenerateGeometry: fewer than 3 non-collinear correspondences (result holds the prior)
    """
    if len(source) == 0 or len(target) == 0:
        raise ValueError('icp_register needs non-empty clouds')
    index = target_index if target_index is not None else NeighborIndex(target.points)
    cap = cfg.max_correspondence_distance
    source_points = source.points
    target_points = index.points
    transform = prior
    history = []
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        moved = transform.transform_points(source_points)
        distances, matches = index.nearest(moved, cap)
        history.append(_truncated_rms(distances, cap, len(source_points)))
        inliers = matches >= 0
        if _is_collinear(moved[inliers]):
            raise DegenerateGeometry(IcpResult(prior, False, iterations, int(np.count_nonzero(inliers)), np.inf,
                                               history))
        delta = kabsch(moved[inliers], target_points[matches[inliers]])
        transform = compose(delta, transform)
        Logger.get_logger().log(LoggerLevel.DEBUG, 'ICP iteration {}: {} inliers, step {:.5f} m / {:.6f} rad'.format(
            iterations, int(np.count_nonzero(inliers)), np.linalg.norm(delta.translation), delta.rotation_angle))
        if (np.linalg.norm(delta.translation) < cfg.translation_convergence and
                delta.rotation_angle < cfg.rotation_convergence):
            converged = True
            break

    distances, matches = index.nearest(transform.transform_points(source_points), cap)
    history.append(_truncated_rms(distances, cap, len(source_points)))
    inliers = matches >= 0
    count = int(np.count_nonzero(inliers))
    rms = float(np.sqrt(np.mean(distances[inliers] ** 2))) if count else np.inf
    return IcpResult(transform, converged, iterations, count, rms, history)


class SubmapCache(object):
    """
    Keeps the last submap and its index while the selected node set is unchanged
    """

    def __init__(self, cfg):
        self.cfg = cfg
        self._key = None
        self.submap = None
        self.index = None

    def get(self, nodes, node_ids, current, revision):
        """
        :param nodes: list of (Pose, PointCloud)
        :param node_ids: ids matching nodes
        :param current: current Pose
        :param revision: graph revision (changes whenever node poses change)
        :return: (submap PointCloud, NeighborIndex)
        :raises EmptySubmap: when no node qualifies
        """
        selected = select_submap_nodes(nodes, current, self.cfg)
        key = (revision, tuple(node_ids[i] for i in selected))
        if key != self._key:
            self.submap = build_submap([nodes[i] for i in selected], current, self.cfg)
            self.index = NeighborIndex(self.submap.points)
            self._key = key
        return self.submap, self.index
