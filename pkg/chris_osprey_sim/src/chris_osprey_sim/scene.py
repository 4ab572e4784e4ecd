# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Synthetic environment: triangle meshes, optional ground plane, site
bounding box and takeoff pose

Scene file (YAML):

    format_version: 1
    meshes: [building.obj]          # OBJ files relative to the scene file
    ground_plane: true              # infinite plane z = 0
    bounds: {min: [x, y, z], max: [x, y, z]}
    takeoff: {x: 0.0, y: 0.0, z: 0.0, yaw: 0.0}
"""

import os

import numpy as np
import trimesh
from trimesh.ray.ray_triangle import RayMeshIntersector

from chris_osprey_core.exceptions import ParseError, ValidationError
from chris_osprey_core.geometry.pose import Pose
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_core.utilities.utility import read_yaml_document, require_format_version, write_yaml_document

SCENE_FORMAT_VERSION = 1
MIN_TRIANGLE_AREA = 1e-12
# Faces lying on the ground plane are hidden from every sensor pose
_GROUND_TOLERANCE = 1e-6


class Scene(object):
    """
    Static world used by the simulated LiDAR and the evaluation ground truth
    """

    def __init__(self, triangles, ground_plane, bounds_min, bounds_max, takeoff, name=''):
        """
        :param triangles: array-like (M, 3, 3) world-frame triangle corners
        :param ground_plane: True when the plane z = 0 is solid
        :param bounds_min: site bounding box minimum corner
        :param bounds_max: site bounding box maximum corner
        :param takeoff: takeoff Pose
        :param name: label used in logs
        :raises ValidationError: degenerate triangles or takeoff outside the box footprint
        """
        self.triangles = np.array(triangles, dtype=np.float64).reshape(-1, 3, 3)
        self.ground_plane = bool(ground_plane)
        self.bounds_min = np.array(bounds_min, dtype=np.float64).reshape(3)
        self.bounds_max = np.array(bounds_max, dtype=np.float64).reshape(3)
        self.takeoff = takeoff
        self.name = name
        self._ray_intersector = None
        self._validate()

    def _validate(self):
        if not np.all(np.isfinite(self.triangles)):
            raise ValidationError('scene {}: non-finite triangle coordinates'.format(self.name))
        areas = triangle_areas(self.triangles)
        degenerate = np.nonzero(areas <= MIN_TRIANGLE_AREA)[0]
        if degenerate.size:
            raise ValidationError('scene {}: degenerate triangle {} (area {:g})'.format(
                self.name, int(degenerate[0]), float(areas[degenerate[0]])))
        if np.any(self.bounds_max <= self.bounds_min):
            raise ValidationError('scene {}: empty bounding box'.format(self.name))
        position = self.takeoff.translation
        if not (self.bounds_min[0] <= position[0] <= self.bounds_max[0] and
                self.bounds_min[1] <= position[1] <= self.bounds_max[1]):
            raise ValidationError('scene {}: takeoff ({:.2f}, {:.2f}) outside the bounding box footprint'.format(
                self.name, position[0], position[1]))

    @property
    def triangle_count(self):
        return len(self.triangles)

    @property
    def ray_intersector(self):
        """
        :return: trimesh ray intersector over every scene triangle, built on first use
        """
        if self._ray_intersector is None:
            self._ray_intersector = RayMeshIntersector(as_mesh(self.triangles))
        return self._ray_intersector

    def observable_triangles(self):
        """
        :return: (M, 3, 3) triangles minus the faces that lie on the ground plane
        """
        if not self.ground_plane or not len(self.triangles):
            return self.triangles
        on_ground = np.all(self.triangles[:, :, 2] <= _GROUND_TOLERANCE, axis=1)
        return self.triangles[~on_ground]

    def sample_surface(self, density, seed):
        """
        Uniform area-weighted surface sampling used as ground truth

        :param density: points per square meter
        :param seed: sampling seed
        :return: (N, 3) array of surface points
        """
        triangles = self.observable_triangles()
        if not len(triangles):
            return np.zeros((0, 3))
        mesh = as_mesh(triangles)
        count = int(round(density * float(np.sum(triangle_areas(triangles)))))
        if count <= 0:
            return np.zeros((0, 3))
        points, _ = trimesh.sample.sample_surface(mesh, count, seed=seed)
        return np.asarray(points, dtype=np.float64)

    def __str__(self):
        rows = ['Scene {}'.format(self.name),
                '    triangles : {}'.format(self.triangle_count),
                '    ground_plane : {}'.format(self.ground_plane),
                '    bounds : {} -> {}'.format(list(self.bounds_min), list(self.bounds_max)),
                '    takeoff : {}'.format(self.takeoff)]
        return '\n'.join(rows)


def as_mesh(triangles):
    """
    :param triangles: (M, 3, 3) triangle corners
    :return: trimesh.Trimesh with one unshared vertex triple per face
    """
    triangles = np.asarray(triangles, dtype=np.float64).reshape(-1, 3, 3)
    return trimesh.Trimesh(vertices=triangles.reshape(-1, 3), faces=np.arange(3 * len(triangles)).reshape(-1, 3),
                           process=False)


def triangle_areas(triangles):
    """
    :param triangles: (M, 3, 3)
    :return: (M,) triangle areas
    """
    triangles = np.asarray(triangles, dtype=np.float64).reshape(-1, 3, 3)
    if not len(triangles):
        return np.zeros(0)
    return 0.5 * np.linalg.norm(np.cross(triangles[:, 1] - triangles[:, 0], triangles[:, 2] - triangles[:, 0]), axis=1)


def _check_triangles_only(obj_path):
    with open(obj_path, 'r') as fin:
        for number, line in enumerate(fin, 1):
            words = line.split()
            if words and words[0] == 'f' and len(words) != 4:
                raise ParseError('{}:{}: only triangle faces are supported'.format(obj_path, number))


def load_obj_triangles(obj_path):
    """
    :param obj_path: OBJ file with triangle faces
    :return: (M, 3, 3) triangle corners
    :raises ParseError: if the file cannot be parsed
    """
    if not os.path.isfile(obj_path):
        raise ParseError('{}: mesh file not found'.format(obj_path))
    _check_triangles_only(obj_path)
    try:
        mesh = trimesh.load(obj_path, file_type='obj', force='mesh', process=False)
    except Exception as ex:  # trimesh raises assorted types for bad input
        raise ParseError('{}: {}'.format(obj_path, ex))
    if not hasattr(mesh, 'faces') or len(mesh.faces) == 0:
        return np.zeros((0, 3, 3))
    return np.asarray(mesh.vertices, dtype=np.float64)[np.asarray(mesh.faces)]


def _vector(value, size, name, source):
    try:
        array = np.array(value, dtype=np.float64).reshape(size)
    except (TypeError, ValueError):
        raise ParseError('{}: {} must be {} numbers'.format(source, name, size))
    return array


def load_scene(file_path):
    """
    Load a scene file

    :param file_path: YAML scene file
    :return: Scene
    :raises ParseError: malformed file or mesh
    :raises ValidationError: degenerate triangles, takeoff outside the box
    """
    document = read_yaml_document(file_path)
    require_format_version(document, SCENE_FORMAT_VERSION, file_path)
    directory = os.path.dirname(os.path.abspath(file_path))
    for key in ('bounds', 'takeoff'):
        if key not in document:
            raise ParseError('{}: missing "{}"'.format(file_path, key))
    unknown = set(document) - {'format_version', 'meshes', 'ground_plane', 'bounds', 'takeoff'}
    if unknown:
        raise ParseError('{}: unknown keys {}'.format(file_path, sorted(unknown)))

    meshes = document.get('meshes') or []
    if not isinstance(meshes, list):
        raise ParseError('{}: meshes must be a list'.format(file_path))
    chunks = [load_obj_triangles(os.path.join(directory, str(mesh))) for mesh in meshes]
    triangles = np.concatenate(chunks, axis=0) if chunks else np.zeros((0, 3, 3))

    bounds = document['bounds']
    takeoff = document['takeoff']
    if not isinstance(bounds, dict) or not isinstance(takeoff, dict):
        raise ParseError('{}: bounds and takeoff must be mappings'.format(file_path))
    bounds_min = _vector(bounds.get('min'), 3, 'bounds.min', file_path)
    bounds_max = _vector(bounds.get('max'), 3, 'bounds.max', file_path)
    try:
        pose = Pose.from_xyz_yaw(float(takeoff.get('x', 0.0)), float(takeoff.get('y', 0.0)),
                                 float(takeoff.get('z', 0.0)), float(takeoff.get('yaw', 0.0)))
    except (TypeError, ValueError):
        raise ParseError('{}: takeoff values must be numbers'.format(file_path))

    scene = Scene(triangles, document.get('ground_plane', True), bounds_min, bounds_max, pose,
                  name=os.path.basename(file_path))
    Logger.get_logger().log(LoggerLevel.INFO, 'Loaded scene {} with {} triangles.'.format(
        scene.name, scene.triangle_count))
    return scene


def box_triangles(corner_min, corner_max, bottom=True):
    """
    :param bottom: include the two downward-facing triangles
    :return: (12, 3, 3) outward-wound triangles of an axis-aligned box (10 without bottom)
    """
    x0, y0, z0 = corner_min
    x1, y1, z1 = corner_max
    v = np.array([[x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
                  [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1]], dtype=np.float64)
    faces = [(0, 2, 1), (0, 3, 2)] if bottom else []
    faces += [(4, 5, 6), (4, 6, 7), (0, 1, 5), (0, 5, 4),
             (1, 2, 6), (1, 6, 5), (2, 3, 7), (2, 7, 6), (3, 0, 4), (3, 4, 7)]
    return v[np.array(faces)]


def write_obj(obj_path, triangles):
    """
    Write triangles as an OBJ file (three vertices per face, no sharing)
    """
    triangles = np.asarray(triangles, dtype=np.float64).reshape(-1, 3, 3)
    with open(obj_path, 'w') as fout:
        for corner in triangles.reshape(-1, 3):
            fout.write('v {!r} {!r} {!r}\n'.format(*(float(c) for c in corner)))
        for face in range(len(triangles)):
            fout.write('f {} {} {}\n'.format(3 * face + 1, 3 * face + 2, 3 * face + 3))


def write_box_obj(obj_path, corner_min, corner_max):
    write_obj(obj_path, box_triangles(corner_min, corner_max))


def write_scene_file(file_path, meshes, bounds_min, bounds_max, takeoff, ground_plane=True):
    """
    :param meshes: OBJ file names relative to the scene file
    :param takeoff: (x, y, z, yaw)
    """
    x, y, z, yaw = (float(v) for v in takeoff)
    write_yaml_document(file_path, {
        'format_version': SCENE_FORMAT_VERSION,
        'meshes': list(meshes),
        'ground_plane': bool(ground_plane),
        'bounds': {'min': [float(v) for v in bounds_min], 'max': [float(v) for v in bounds_max]},
        'takeoff': {'x': x, 'y': y, 'z': z, 'yaw': yaw}})


def write_building_analog(directory):
    """
    Desk-scale analog of the industrial building survey: a 30 x 16 x 12 m
    block with two rooftop structures, a ground plane and a site box that
    leaves room to fly around it

    :param directory: destination directory (created by the caller)
    :return: path of the scene file
    """
    triangles = np.concatenate([box_triangles((0.0, 0.0, 0.0), (30.0, 16.0, 12.0)),
                                box_triangles((4.0, 4.0, 12.0), (10.0, 9.0, 14.5), bottom=False),
                                box_triangles((19.0, 8.0, 12.0), (25.0, 13.0, 13.5), bottom=False)], axis=0)
    write_obj(os.path.join(directory, 'building_a.obj'), triangles)
    scene_path = os.path.join(directory, 'building_a.yaml')
    write_scene_file(scene_path, ['building_a.obj'], bounds_min=(-4.0, -4.0, 0.25),
                     bounds_max=(34.0, 20.0, 16.0), takeoff=(-2.0, -2.0, 0.0, 0.0))
    return scene_path
