# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Session persistence for multi-session mapping

Session directory:

    graph.g2o            VERTEX_SE3:QUAT / EDGE_SE3:QUAT records
    clouds/<id>.ply      node clouds (sensor frame, binary float32)
    descriptors/<id>.scd place descriptors (optional)
    meta.yaml            format_version, sessions, frame correction, node metadata
    graph.dot            pose graph drawing

g2o records are written with 9 significant digits, which other tools read
directly. Each record is followed by a '#EXACT' comment carrying the same
numbers as hexadecimal floats so that a saved graph loads bit for bit.
Loop-closure and relocalization edges are preceded by a '# TAG <kind>'
comment; untagged edges are odometry.
"""

import math
import os

from chris_osprey_core.exceptions import ParseError, SessionIOError
from chris_osprey_core.geometry.ply import read_ply, write_ply
from chris_osprey_core.geometry.pose import Pose
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_core.utilities.utility import (create_directory_path, list_files_with_extension,
                                                read_yaml_document, require_format_version, write_yaml_document)
from chris_osprey_slam.place_recognition import DescriptorDatabase, read_descriptor, write_descriptor
from chris_osprey_slam.pose_graph import Factor, FactorKind, GraphConfig, GraphNode, PoseGraph

SESSION_FORMAT_VERSION = 1
GRAPH_FILE = 'graph.g2o'
META_FILE = 'meta.yaml'
CLOUD_DIRECTORY = 'clouds'
DESCRIPTOR_DIRECTORY = 'descriptors'

_VERTEX = 'VERTEX_SE3:QUAT'
_EDGE = 'EDGE_SE3:QUAT'
_EXACT = '#EXACT'
_TAG = '# TAG'


def _pose_values(pose):
    translation = pose.translation
    quaternion = pose.quaternion
    return [float(v) for v in translation] + [float(v) for v in quaternion]


def _information(weight):
    values = []
    for row in range(6):
        for col in range(row, 6):
            values.append(weight if row == col else 0.0)
    return values


def _text(values):
    return ' '.join('{:.9g}'.format(v) for v in values)


def _exact(values):
    return '{} {}'.format(_EXACT, ' '.join(float(v).hex() for v in values))


def write_g2o(file_path, graph):
    """
    :param file_path: destination
    :param graph: PoseGraph
    :raises SessionIOError: if the file cannot be written
    """
    rows = []
    for key, node in graph.nodes.items:
        values = _pose_values(node.pose)
        rows.append('{} {} {}'.format(_VERTEX, key, _text(values)))
        rows.append(_exact(values))
    for factor in graph.factors:
        if factor.kind != FactorKind.ODOMETRY:
            rows.append('{} {}'.format(_TAG, factor.kind.value))
        values = _pose_values(factor.relative)
        rows.append('{} {} {} {} {}'.format(_EDGE, factor.from_id, factor.to_id, _text(values),
                                            _text(_information(factor.weight))))
        rows.append(_exact(values + [factor.weight]))
    try:
        with open(file_path, 'w') as fout:
            fout.write('\n'.join(rows))
            fout.write('\n')
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to write pose graph {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))


def _floats(words, file_path, number):
    try:
        return [float(w) for w in words]
    except ValueError:
        raise ParseError('{}:{}: malformed number'.format(file_path, number))


def _exact_floats(words, file_path, number):
    try:
        return [float.fromhex(w) for w in words]
    except ValueError:
        raise ParseError('{}:{}: malformed exact value'.format(file_path, number))


def read_g2o(file_path):
    """
    :return: (list of (node id, Pose), list of (kind, from, to, Pose, weight)) in file order
    :raises SessionIOError: missing file
    :raises ParseError: malformed record
    """
    try:
        with open(file_path, 'r') as fin:
            lines = fin.read().splitlines()
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to read pose graph {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))

    vertices = []
    edges = []
    pending_kind = FactorKind.ODOMETRY
    last = None
    for number, line in enumerate(lines, 1):
        words = line.split()
        if not words:
            continue
        if words[0] == _EXACT:
            if last is None:
                raise ParseError('{}:{}: exact values without a record'.format(file_path, number))
            exact = _exact_floats(words[1:], file_path, number)
            if len(exact) != len(last[1]):
                raise ParseError('{}:{}: exact values do not match the record'.format(file_path, number))
            last[1][:] = exact
            last = None
        elif line.startswith(_TAG):
            try:
                pending_kind = FactorKind(words[2])
            except (IndexError, ValueError):
                raise ParseError('{}:{}: unknown factor tag'.format(file_path, number))
        elif words[0].startswith('#'):
            continue
        elif words[0] == _VERTEX:
            if len(words) != 9:
                raise ParseError('{}:{}: vertex needs id and 7 values'.format(file_path, number))
            values = _floats(words[2:9], file_path, number)
            vertices.append((int(words[1]), values))
            last = vertices[-1]
        elif words[0] == _EDGE:
            if len(words) != 31:
                raise ParseError('{}:{}: edge needs 2 ids, 7 values and 21 information entries'.format(
                    file_path, number))
            values = _floats(words[3:10], file_path, number) + [_floats(words[10:31], file_path, number)[0]]
            edges.append((pending_kind, int(words[1]), int(words[2]), values))
            last = (None, edges[-1][3])
            pending_kind = FactorKind.ODOMETRY
        else:
            raise ParseError('{}:{}: unknown record {}'.format(file_path, number, words[0]))

    def to_pose(values):
        # Records without exact values carry 9-digit quaternions
        if abs(math.sqrt(sum(v * v for v in values[3:7])) - 1.0) > 1e-9:
            return Pose(values[3:7], values[0:3])
        return Pose.from_stored(values[3:7], values[0:3])

    return ([(key, to_pose(values)) for key, values in vertices],
            [(kind, a, b, to_pose(values), values[7]) for kind, a, b, values in edges])


def save_session(graph, directory_path, db=None):
    """
    Persist the pose graph (and optionally its place descriptors)

    :param graph: PoseGraph
    :param directory_path: session directory (created when missing)
    :param db: optional DescriptorDatabase
    :raises SessionIOError: if a file cannot be written
    """
    cloud_directory = os.path.join(directory_path, CLOUD_DIRECTORY)
    try:
        create_directory_path(cloud_directory)
    except (IOError, OSError) as ex:
        raise SessionIOError(directory_path, str(ex))
    write_g2o(os.path.join(directory_path, GRAPH_FILE), graph)
    nodes = {}
    for key, node in graph.nodes.items:
        write_ply(os.path.join(cloud_directory, '{}.ply'.format(key)), node.cloud)
        nodes[key] = {'session': node.session_id, 'stamp': node.stamp,
                      'odometry_pose': node.odometry_pose.to_list()}
    if db is not None:
        descriptor_directory = os.path.join(directory_path, DESCRIPTOR_DIRECTORY)
        create_directory_path(descriptor_directory)
        for key in db.keys:
            write_descriptor(os.path.join(descriptor_directory, '{}.scd'.format(key)), db.descriptor(key))
    write_yaml_document(os.path.join(directory_path, META_FILE), {
        'format_version': SESSION_FORMAT_VERSION,
        'session_count': graph.session_count,
        'revision': graph.revision,
        'frame_correction': graph.frame_correction.to_list(),
        'graph_config': graph.config.to_dict(),
        'nodes': nodes})
    graph.save_dot_graph(directory_path)
    Logger.get_logger().log(LoggerLevel.INFO, 'Session saved to {} ({} nodes, {} factors).'.format(
        directory_path, len(graph.nodes), len(graph.factors)))


def _stored_pose(values, source):
    if not isinstance(values, list) or len(values) != 7:
        raise ParseError('{}: pose needs 7 values'.format(source))
    values = [float(v) for v in values]
    return Pose.from_stored(values[3:7], values[0:3])


def load_session(directory_path):
    """
    :param directory_path: directory written by save_session
    :return: PoseGraph equal to the saved one
    :raises SessionIOError: missing or unreadable files
    :raises FormatVersionMismatch: unsupported meta version
    :raises ParseError: malformed files
    """
    meta_path = os.path.join(directory_path, META_FILE)
    meta = read_yaml_document(meta_path)
    require_format_version(meta, SESSION_FORMAT_VERSION, meta_path)
    node_meta = meta.get('nodes') or {}
    graph = PoseGraph(GraphConfig.from_dict(meta.get('graph_config')))
    graph.session_count = int(meta.get('session_count', 0))
    graph.revision = int(meta.get('revision', 0))

    vertices, edges = read_g2o(os.path.join(directory_path, GRAPH_FILE))
    for key, pose in vertices:
        if key not in node_meta:
            raise ParseError('{}: no metadata for node {}'.format(meta_path, key))
        entry = node_meta[key]
        cloud = read_ply(os.path.join(directory_path, CLOUD_DIRECTORY, '{}.ply'.format(key)), scan_id=key)
        graph.nodes.add(key, GraphNode(key, pose, cloud, int(entry['session']),
                                       _stored_pose(entry['odometry_pose'], meta_path), float(entry['stamp'])))
    for kind, from_id, to_id, pose, weight in edges:
        graph.add_factor(Factor(kind, from_id, to_id, pose, weight))
    graph.frame_correction = _stored_pose(meta.get('frame_correction'), meta_path)
    Logger.get_logger().log(LoggerLevel.INFO, 'Session loaded from {} ({} nodes, {} sessions).'.format(
        directory_path, len(graph.nodes), graph.session_count))
    return graph


def load_descriptors(directory_path):
    """
    :return: DescriptorDatabase of a session directory (empty when none were saved)
    """
    db = DescriptorDatabase()
    descriptor_directory = os.path.join(directory_path, DESCRIPTOR_DIRECTORY)
    if not os.path.isdir(descriptor_directory):
        return db
    for file_name in list_files_with_extension(descriptor_directory, '.scd'):
        key = int(os.path.splitext(file_name)[0])
        db.add_descriptor(key, read_descriptor(os.path.join(descriptor_directory, file_name)))
    return db

