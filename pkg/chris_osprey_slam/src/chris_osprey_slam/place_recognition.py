# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
ScanContext place recognition for multi-session relocalization

A descriptor is a rings x sectors grid holding the maximum point height in
every polar bin of a sensor-frame cloud. Rotating the cloud about z shifts
the grid columns cyclically, so matching scores every column shift.

Descriptor file (.scd): magic b'SCD1', rings and sectors as little-endian
uint32, max radius as float64, then the row-major float32 matrix.
"""

import math
import struct
from enum import Enum, unique

import numpy as np

from chris_osprey_core.base_metamodel import _Bank, _ConfigMetamodel
from chris_osprey_core.exceptions import ParseError, SessionIOError
from chris_osprey_core.geometry.pose import Pose, relative
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_slam.exceptions import DegenerateGeometry, IncompatibleShape
from chris_osprey_slam.pose_graph import Factor, FactorKind
from chris_osprey_slam.registration import icp_register

DESCRIPTOR_MAGIC = b'SCD1'
_HEADER = struct.Struct('<4sIId')


class ScanContextConfig(_ConfigMetamodel):
    """
    Descriptor grid, candidate retrieval and acceptance
    """
    yaml_tag = u'!scan_context_config'
    HUMAN_OUTPUT_NAME = 'Scan Context Config'
    DEFAULTS = {
        'rings': 20,
        'sectors': 60,
        'max_radius': 20.0,
        'shortlist': 10,
        'accept_threshold': 0.2,
        'max_verifications': 10,
        'min_inlier_fraction': 0.2,
    }

    def validate(self):
        self._require(self.rings >= 1 and self.sectors >= 1, 'rings and sectors must be at least 1')
        self._require(self.max_radius > 0.0, 'max_radius must be positive')
        self._require(self.shortlist >= 1, 'shortlist must be at least 1')
        self._require(0.0 <= self.accept_threshold <= 1.0, 'accept_threshold must be in [0, 1]')
        self._require(self.max_verifications >= 1, 'max_verifications must be at least 1')
        self._require(0.0 < self.min_inlier_fraction <= 1.0, 'min_inlier_fraction must be in (0, 1]')

    @property
    def sector_angle(self):
        """
        :return: sector width in radians
        """
        return 2.0 * math.pi / self.sectors


class ScanContextDescriptor(object):
    """
    Rings x sectors matrix of maximum heights, 0 for empty bins
    """

    def __init__(self, matrix, max_radius):
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.ndim != 2 or not np.all(np.isfinite(matrix)):
            raise ValueError('descriptor must be a finite 2D matrix')
        matrix.flags.writeable = False
        self._matrix = matrix
        self.max_radius = float(max_radius)

    @property
    def matrix(self):
        return self._matrix

    @property
    def shape(self):
        return self._matrix.shape

    @property
    def rings(self):
        return self._matrix.shape[0]

    @property
    def sectors(self):
        return self._matrix.shape[1]

    def ring_key(self):
        """
        :return: per-ring fraction of non-empty sectors
        """
        return np.count_nonzero(self._matrix, axis=1) / float(self.sectors)

    def shifted(self, shift):
        """
        :return: descriptor of the cloud rotated by shift sectors about z
        """
        return ScanContextDescriptor(np.roll(self._matrix, shift, axis=1), self.max_radius)

    def __eq__(self, other):
        return (isinstance(other, ScanContextDescriptor) and self.max_radius == other.max_radius and
                self.shape == other.shape and np.array_equal(self._matrix, other.matrix))

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return 'ScanContextDescriptor({}x{}, {} occupied)'.format(
            self.rings, self.sectors, int(np.count_nonzero(self._matrix)))


class DescriptorEntry(object):
    """
    Database entry: descriptor and its cached ring key
    """

    def __init__(self, descriptor):
        self.descriptor = descriptor
        self.ring_key = descriptor.ring_key()

    def __str__(self):
        return repr(self.descriptor)


class DescriptorDatabase(_Bank):
    """
    Descriptors of the pose graph nodes keyed by node id
    """
    HUMAN_OUTPUT_NAME = 'Place Descriptors:'

    def add_descriptor(self, node_id, descriptor):
        """
        :raises KeyError: if node_id already has a descriptor
        """
        self.add(node_id, DescriptorEntry(descriptor))

    def descriptor(self, node_id):
        return self[node_id].descriptor

    def __eq__(self, other):
        return (isinstance(other, DescriptorDatabase) and self.keys == other.keys and
                all(self.descriptor(key) == other.descriptor(key) for key in self.keys))

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None


@unique
class NoMatchReason(Enum):
    """
    Why relocalization found no match
    """
    NO_CANDIDATES = 1
    VERIFICATION_FAILED = 2


class NoMatch(object):
    """
    relocalize outcome when no candidate was confirmed
    """

    def __init__(self, reason, candidates_tried=0):
        self.reason = reason
        self.candidates_tried = candidates_tried

    def __repr__(self):
        return 'NoMatch({}, tried={})'.format(self.reason.name, self.candidates_tried)


def compute_descriptor(cloud, cfg):
    """
    :param cloud: sensor-frame PointCloud (sensor at the origin)
    :param cfg: ScanContextConfig
    :return: ScanContextDescriptor
    """
    matrix = np.full((cfg.rings, cfg.sectors), -np.inf)
    points = cloud.points
    if len(points):
        radius = np.hypot(points[:, 0], points[:, 1])
        inside = radius < cfg.max_radius
        points = points[inside]
        ring = np.minimum((radius[inside] / (cfg.max_radius / cfg.rings)).astype(np.int64), cfg.rings - 1)
        azimuth = np.mod(np.arctan2(points[:, 1], points[:, 0]), 2.0 * math.pi)
        sector = np.minimum((azimuth / cfg.sector_angle).astype(np.int64), cfg.sectors - 1)
        np.maximum.at(matrix, (ring, sector), points[:, 2])
    matrix[np.isneginf(matrix)] = 0.0
    # Stored as float32 in descriptor files
    return ScanContextDescriptor(matrix.astype(np.float32).astype(np.float64), cfg.max_radius)


def distance(a, b):
    """
    Rotation-invariant descriptor distance

    For every shift s, column j of a is compared with column j + s of b;
    columns empty in both are skipped and the score is the mean of
    (1 - cosine similarity) with the cosine clipped to [0, 1].

    :param a: ScanContextDescriptor
    :param b: ScanContextDescriptor
    :return: (score in [0, 1], shift) with b equal to a rolled by shift
        columns when the score is 0; ties go to the smallest shift
    :raises IncompatibleShape: for different grid sizes
    """
    if a.shape != b.shape:
        raise IncompatibleShape('descriptor shapes {} and {} differ'.format(a.shape, b.shape))
    sectors = a.sectors
    left = a.matrix
    columns = (np.arange(sectors)[None, :] + np.arange(sectors)[:, None]) % sectors
    right = b.matrix[:, columns]
    dot = np.einsum('rj,rsj->sj', left, right)
    left_norm = np.linalg.norm(left, axis=0)[None, :]
    right_norm = np.linalg.norm(b.matrix, axis=0)[columns]
    both_empty = (left_norm == 0.0) & (right_norm == 0.0)
    defined = (left_norm > 0.0) & (right_norm > 0.0)
    cosine = np.zeros_like(dot)
    cosine[defined] = dot[defined] / (np.broadcast_to(left_norm, dot.shape)[defined] * right_norm[defined])
    cosine[np.all(left[:, None, :] == right, axis=0)] = 1.0
    cost = np.where(both_empty, 0.0, 1.0 - np.clip(cosine, 0.0, 1.0))
    counted = np.count_nonzero(~both_empty, axis=1)
    scores = np.where(counted > 0, cost.sum(axis=1) / np.maximum(counted, 1), 0.0)
    shift = int(np.argmin(scores))
    return float(scores[shift]), shift


def query(db, query_descriptor, k, accept_threshold=0.2, shortlist=10):
    """
    Ring-key shortlist re-scored with the full distance

    :param db: DescriptorDatabase
    :param query_descriptor: ScanContextDescriptor
    :param k: maximum number of results
    :param accept_threshold: maximum score kept
    :param shortlist: candidates kept after ring-key ranking
    :return: list of (node id, score, shift) by ascending score then id
    """
    if not len(db) or k <= 0:
        return []
    keys = db.keys
    query_key = query_descriptor.ring_key()
    ring_distance = np.array([np.linalg.norm(db[key].ring_key - query_key) for key in keys])
    order = np.lexsort((np.array(keys), ring_distance))[:shortlist]
    results = []
    for index in order:
        key = keys[index]
        score, shift = distance(query_descriptor, db.descriptor(key))
        if score <= accept_threshold:
            results.append((key, score, shift))
    results.sort(key=lambda entry: (entry[1], entry[0]))
    return results[:k]


def yaw_of_shift(shift, sectors):
    """
    :return: yaw (rad) in [-pi, pi) matching a column shift
    """
    angle = 2.0 * math.pi * shift / sectors
    return angle - 2.0 * math.pi if angle >= math.pi else angle


def relocalize(graph, db, cloud, prior_guess, icp_cfg, cfg, node_id=None):
    """
    Match a new sensor-frame cloud against the stored map and confirm with ICP

    :param graph: PoseGraph whose nodes are in db
    :param db: DescriptorDatabase
    :param cloud: new PointCloud in its sensor frame
    :param prior_guess: map-frame Pose guess of the new scan (translation
        seeds ICP), or None
    :param icp_cfg: IcpConfig
    :param cfg: ScanContextConfig
    :param node_id: id the new scan will take (None leaves the factor unattached)
    :return: relocalization Factor (matched node -> new node) or NoMatch
    """
    query_descriptor = compute_descriptor(cloud, cfg)
    candidates = query(db, query_descriptor, cfg.max_verifications, cfg.accept_threshold, cfg.shortlist)
    if not candidates:
        Logger.get_logger().log(LoggerLevel.DEBUG, 'Relocalization: no descriptor candidate.')
        return NoMatch(NoMatchReason.NO_CANDIDATES)

    threshold = min(icp_cfg.min_inliers, int(math.ceil(cfg.min_inlier_fraction * len(cloud))))
    for tried, (key, score, shift) in enumerate(candidates, 1):
        matched = graph.nodes[key]
        translation = None if prior_guess is None else relative(matched.pose, prior_guess).translation
        prior = Pose.from_xyz_yaw(0.0, 0.0, 0.0, yaw_of_shift(shift, cfg.sectors))
        prior = Pose(prior.quaternion, translation)
        try:
            result = icp_register(cloud, matched.cloud, prior, icp_cfg)
        except DegenerateGeometry:
            continue
        if result.converged and result.inlier_count >= threshold:
            Logger.get_logger().log(LoggerLevel.INFO, 'Relocalized against node {} (score {:.3f}, shift {}).'.format(
                key, score, shift))
            return Factor(FactorKind.RELOCALIZATION, key, node_id, result.transform,
                          graph.config.weight(FactorKind.RELOCALIZATION), evidence=result)
        Logger.get_logger().log(LoggerLevel.DEBUG, 'Relocalization candidate {} rejected: {}'.format(key, result))
    return NoMatch(NoMatchReason.VERIFICATION_FAILED, len(candidates))


def write_descriptor(file_path, descriptor):
    """
    :raises SessionIOError: if the file cannot be written
    """
    data = np.ascontiguousarray(descriptor.matrix, dtype='<f4')
    try:
        with open(file_path, 'wb') as fout:
            fout.write(_HEADER.pack(DESCRIPTOR_MAGIC, descriptor.rings, descriptor.sectors, descriptor.max_radius))
            fout.write(data.tobytes())
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to write descriptor {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))


def read_descriptor(file_path):
    """
    :return: ScanContextDescriptor
    :raises SessionIOError: missing or truncated file
    :raises ParseError: wrong magic
    """
    try:
        with open(file_path, 'rb') as fin:
            header = fin.read(_HEADER.size)
            if len(header) != _HEADER.size:
                raise SessionIOError(file_path, 'truncated descriptor header')
            magic, rings, sectors, max_radius = _HEADER.unpack(header)
            if magic != DESCRIPTOR_MAGIC:
                raise ParseError('{}: not a descriptor file'.format(file_path))
            body = fin.read(4 * rings * sectors)
    except (IOError, OSError) as ex:
        if isinstance(ex, SessionIOError):
            raise
        raise SessionIOError(file_path, str(ex))
    if len(body) != 4 * rings * sectors:
        raise SessionIOError(file_path, 'truncated descriptor matrix')
    matrix = np.frombuffer(body, dtype='<f4').reshape(rings, sectors).astype(np.float64)
    return ScanContextDescriptor(matrix, max_radius)
