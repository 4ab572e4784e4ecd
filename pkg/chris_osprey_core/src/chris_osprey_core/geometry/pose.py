# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Rigid transforms in 3D

A Pose stores a unit quaternion (x, y, z, w order, as scipy) and a
translation; the rotation matrix is cached for hot loops. Poses are
immutable: every operation returns a new Pose.
"""

import math

import numpy as np
from scipy.spatial.transform import Rotation

from chris_osprey_core.exceptions import ValidationError


def _normalized(quaternion):
    quaternion = np.asarray(quaternion, dtype=np.float64).reshape(4)
    norm = np.linalg.norm(quaternion)
    if not np.isfinite(norm) or norm < 1e-12:
        raise ValidationError('invalid quaternion {}'.format(quaternion))
    return quaternion / norm


def wrap_angle(angle):
    """
    Wrap an angle to [-pi, pi)
    :param angle: radians
    :return: wrapped angle in radians
    """
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


class Pose(object):
    """
    Rigid body transform (rotation then translation)
    """
    __slots__ = ('_quaternion', '_translation', '_matrix')

    def __init__(self, quaternion=None, translation=None):
        """
        :param quaternion: (x, y, z, w); None for identity rotation
        :param translation: 3-vector in meters; None for zero
        """
        if quaternion is None:
            quaternion = (0.0, 0.0, 0.0, 1.0)
        if translation is None:
            translation = (0.0, 0.0, 0.0)
        self._quaternion = _normalized(quaternion)
        self._translation = np.array(translation, dtype=np.float64).reshape(3)
        if not np.all(np.isfinite(self._translation)):
            raise ValidationError('invalid translation {}'.format(self._translation))
        self._quaternion.flags.writeable = False
        self._translation.flags.writeable = False
        self._matrix = None

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_rotation(cls, rotation, translation=None):
        """
        :param rotation: scipy Rotation
        :param translation: 3-vector
        """
        return cls(rotation.as_quat(), translation)

    @classmethod
    def from_matrix(cls, rotation_matrix, translation=None):
        """
        :param rotation_matrix: 3x3 proper rotation
        :param translation: 3-vector
        """
        return cls(Rotation.from_matrix(np.asarray(rotation_matrix, dtype=np.float64)).as_quat(), translation)

    @classmethod
    def from_homogeneous(cls, matrix):
        """
        :param matrix: 4x4 homogeneous transform
        """
        matrix = np.asarray(matrix, dtype=np.float64)
        return cls.from_matrix(matrix[:3, :3], matrix[:3, 3])

    @classmethod
    def from_rotvec(cls, rotation_vector, translation=None):
        """
        :param rotation_vector: axis * angle (radians)
        :param translation: 3-vector
        """
        return cls(Rotation.from_rotvec(np.asarray(rotation_vector, dtype=np.float64)).as_quat(), translation)

    @classmethod
    def from_xyz_yaw(cls, x, y, z, yaw):
        """
        4-DoF pose: position plus rotation about +z
        """
        half = 0.5 * yaw
        return cls((0.0, 0.0, math.sin(half), math.cos(half)), (x, y, z))

    @classmethod
    def from_translation(cls, translation):
        return cls(None, translation)

    @classmethod
    def from_stored(cls, quaternion, translation):
        """
        Rebuild a persisted pose bit for bit (no renormalization)

        :param quaternion: unit quaternion (x, y, z, w) as written
        :param translation: 3-vector as written
        :raises ValidationError: if the quaternion is not unit length
        """
        pose = cls(quaternion, translation)
        stored = np.array(quaternion, dtype=np.float64).reshape(4)
        if abs(np.linalg.norm(stored) - 1.0) > 1e-9:
            raise ValidationError('stored quaternion {} is not unit length'.format(stored))
        stored.flags.writeable = False
        pose._quaternion = stored
        return pose

    @property
    def quaternion(self):
        """
        :return: read-only unit quaternion (x, y, z, w)
        """
        return self._quaternion

    @property
    def translation(self):
        """
        :return: read-only translation (meters)
        """
        return self._translation

    @property
    def rotation(self):
        """
        :return: scipy Rotation
        """
        return Rotation.from_quat(self._quaternion)

    @property
    def rotation_matrix(self):
        """
        :return: read-only 3x3 rotation matrix
        """
        if self._matrix is None:
            x, y, z, w = self._quaternion
            matrix = np.array([
                [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
                [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
                [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)]])
            matrix.flags.writeable = False
            self._matrix = matrix
        return self._matrix

    @property
    def homogeneous(self):
        """
        :return: 4x4 homogeneous matrix
        """
        matrix = np.eye(4)
        matrix[:3, :3] = self.rotation_matrix
        matrix[:3, 3] = self._translation
        return matrix

    @property
    def yaw(self):
        """
        :return: heading of the rotated x axis in the horizontal plane (radians)
        """
        matrix = self.rotation_matrix
        return math.atan2(matrix[1, 0], matrix[0, 0])

    @property
    def rotation_angle(self):
        """
        :return: magnitude of the rotation (radians, in [0, pi])
        """
        w = min(1.0, abs(self._quaternion[3]))
        xyz = np.linalg.norm(self._quaternion[:3])
        return 2.0 * math.atan2(xyz, w)

    @property
    def rotation_vector(self):
        return self.rotation.as_rotvec()

    def compose(self, other):
        """
        :param other: Pose applied first
        :return: self o other
        """
        return compose(self, other)

    def inverse(self):
        return inverse(self)

    def __mul__(self, other):
        return compose(self, other)

    def transform_points(self, points):
        """
        Apply the transform to an (N, 3) array
        :param points: array-like (N, 3)
        :return: new (N, 3) float64 array
        """
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return points.dot(self.rotation_matrix.T) + self._translation

    def transform_point(self, point):
        return self.rotation_matrix.dot(np.asarray(point, dtype=np.float64)) + self._translation

    def distance_to(self, other):
        """
        :return: Euclidean distance between the translations (meters)
        """
        return float(np.linalg.norm(self._translation - other.translation))

    def is_close(self, other, translation_tolerance=1e-9, rotation_tolerance=1e-9):
        """
        Compare two poses by relative rotation angle and translation distance
        """
        delta = compose(inverse(self), other)
        return (np.linalg.norm(delta.translation) <= translation_tolerance and
                delta.rotation_angle <= rotation_tolerance)

    def to_list(self):
        """
        :return: [x, y, z, qx, qy, qz, qw] plain floats
        """
        return [float(v) for v in self._translation] + [float(v) for v in self._quaternion]

    @classmethod
    def from_list(cls, values):
        """
        Inverse of to_list
        """
        values = [float(v) for v in values]
        if len(values) != 7:
            raise ValidationError('pose needs 7 values, got {}'.format(len(values)))
        return cls(values[3:7], values[0:3])

    def __eq__(self, other):
        return (isinstance(other, Pose) and np.array_equal(self._quaternion, other.quaternion) and
                np.array_equal(self._translation, other.translation))

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return 'Pose(t=[{:.4f}, {:.4f}, {:.4f}], q=[{:.6f}, {:.6f}, {:.6f}, {:.6f}])'.format(
            *(list(self._translation) + list(self._quaternion)))


def _quaternion_product(a, b):
    ax, ay, az, aw = a
    bx, by, bz, bw = b
    return np.array([aw * bx + ax * bw + ay * bz - az * by,
                     aw * by - ax * bz + ay * bw + az * bx,
                     aw * bz + ax * by - ay * bx + az * bw,
                     aw * bw - ax * bx - ay * by - az * bz])


def compose(a, b):
    """
    Compose two poses: the result applies b then a

    :param a: outer Pose
    :param b: inner Pose
    :return: a o b, quaternion renormalized
    :rtype: Pose
    """
    quaternion = _quaternion_product(a.quaternion, b.quaternion)
    translation = a.rotation_matrix.dot(b.translation) + a.translation
    return Pose(quaternion, translation)


def inverse(pose):
    """
    :param pose: Pose
    :return: pose^-1
    """
    x, y, z, w = pose.quaternion
    conjugate = np.array([-x, -y, -z, w])
    translation = -pose.rotation_matrix.T.dot(pose.translation)
    return Pose(conjugate, translation)


def relative(a, b):
    """
    :return: a^-1 o b, the pose of b expressed in the frame of a
    """
    return compose(inverse(a), b)


def interpolate_yaw(yaw_a, yaw_b, fraction):
    """
    Linear interpolation along the shortest arc between two headings
    """
    return wrap_angle(yaw_a + fraction * wrap_angle(yaw_b - yaw_a))
