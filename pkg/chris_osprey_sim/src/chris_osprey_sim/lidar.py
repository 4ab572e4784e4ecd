# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Ray-cast spinning LiDAR

Rays are laid out on a regular (vertical, horizontal) grid in the sensor
frame; the first surface hit within range yields one point. Mesh hits come
from the numpy trimesh ray intersector; the ground plane is intersected
analytically.
"""

import numpy as np

from chris_osprey_core.base_metamodel import _ConfigMetamodel
from chris_osprey_core.geometry.point_cloud import PointCloud

_PARALLEL_EPSILON = 1e-12


class SensorModel(_ConfigMetamodel):
    """
    Spinning LiDAR geometry and noise (defaults of the 64-beam payload sensor)
    """
    yaml_tag = u'!sensor_model'
    HUMAN_OUTPUT_NAME = 'Sensor Model'
    DEFAULTS = {
        'horizontal_fov': 360.0,
        'vertical_fov': 104.2,
        'horizontal_resolution': 600,
        'vertical_resolution': 64,
        'max_range': 20.0,
        'range_noise_sigma': 0.0,
        'scan_rate': 10.0,
    }

    def validate(self):
        self._require(0.0 < self.horizontal_fov <= 360.0, 'horizontal_fov must be in (0, 360]')
        self._require(0.0 <= self.vertical_fov < 180.0, 'vertical_fov must be in [0, 180)')
        self._require(self.horizontal_resolution >= 1 and self.vertical_resolution >= 1,
                      'resolutions must be at least 1')
        self._require(self.max_range > 0.0, 'max_range must be positive')
        self._require(self.range_noise_sigma >= 0.0, 'range_noise_sigma must be non-negative')
        self._require(self.scan_rate > 0.0, 'scan_rate must be positive')

    @property
    def horizontal_step(self):
        """
        :return: azimuth spacing in degrees
        """
        return self.horizontal_fov / self.horizontal_resolution

    @property
    def vertical_step(self):
        """
        :return: elevation spacing in degrees (0 for a single beam)
        """
        if self.vertical_resolution == 1:
            return 0.0
        return self.vertical_fov / (self.vertical_resolution - 1)

    def elevations(self):
        """
        :return: beam elevations in radians, uniformly spread over the vertical fov
        """
        return np.radians(-0.5 * self.vertical_fov + self.vertical_step * np.arange(self.vertical_resolution))

    def azimuths(self):
        """
        :return: firing azimuths in radians
        """
        return np.radians(-0.5 * self.horizontal_fov + self.horizontal_step * np.arange(self.horizontal_resolution))

    def ray_directions(self):
        """
        :return: (V*H, 3) unit directions in the sensor frame ordered by (vertical, horizontal)
        """
        elevation, azimuth = np.meshgrid(self.elevations(), self.azimuths(), indexing='ij')
        cos_elevation = np.cos(elevation)
        directions = np.stack([cos_elevation * np.cos(azimuth), cos_elevation * np.sin(azimuth),
                               np.sin(elevation)], axis=-1)
        return directions.reshape(-1, 3)


def cast_rays(scene, origin, directions):
    """
    Distance to the first surface along each world-frame ray

    :param scene: Scene
    :param origin: (3,) world-frame origin
    :param directions: (N, 3) world-frame unit directions
    :return: (N,) distances, inf for misses
    """
    origin = np.asarray(origin, dtype=np.float64)
    distance = np.full(directions.shape[0], np.inf)
    if scene.ground_plane and origin[2] > 0.0:
        down = directions[:, 2] < -_PARALLEL_EPSILON
        distance[down] = -origin[2] / directions[down, 2]
    if scene.triangle_count:
        origins = np.tile(origin, (directions.shape[0], 1))
        locations, index_ray, _ = scene.ray_intersector.intersects_location(
            ray_origins=origins, ray_directions=directions, multiple_hits=False)
        if len(index_ray):
            np.minimum.at(distance, index_ray, np.linalg.norm(locations - origin, axis=1))
    return distance


def simulate_scan(scene, sensor_pose, model, seed, scan_id=0):
    """
    Simulate one LiDAR sweep

    :param scene: Scene
    :param sensor_pose: sensor Pose in the world frame
    :param model: SensorModel
    :param seed: seed of the range noise (Gaussian, truncated at 3 sigma)
    :param scan_id: id given to the returned cloud
    :return: PointCloud in the sensor frame ordered by (vertical, horizontal) ray index
    """
    local = model.ray_directions()
    world = local.dot(sensor_pose.rotation_matrix.T)
    distance = cast_rays(scene, sensor_pose.translation, world)
    noise = np.zeros(len(distance))
    if model.range_noise_sigma > 0.0:
        sigma = model.range_noise_sigma
        noise = np.clip(np.random.default_rng(seed).normal(0.0, sigma, len(distance)), -3.0 * sigma, 3.0 * sigma)
    hit = distance <= model.max_range
    ranges = distance[hit] + noise[hit]
    keep = ranges > 0.0
    points = local[hit][keep] * ranges[keep][:, None]
    return PointCloud(points, scan_id)
