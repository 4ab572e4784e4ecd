# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
PLY reader and writer for xyz point clouds

Only a single `vertex` element with float32 x, y, z properties is
accepted, in ascii or binary_little_endian encoding. Any other layout
(extra elements or properties, double precision, big endian) is rejected
with a ParseError instead of being converted, which general mesh loaders
such as trimesh do silently; the header is therefore parsed here and the
payload read directly with numpy.
"""

import numpy as np

from chris_osprey_core.exceptions import ParseError, SessionIOError
from chris_osprey_core.geometry.point_cloud import PointCloud
from chris_osprey_core.utilities.logger import Logger, LoggerLevel

ASCII = 'ascii'
BINARY = 'binary_little_endian'
_FLOAT_TYPES = ('float', 'float32')
_PROPERTIES = ('x', 'y', 'z')


def _header(count, encoding):
    return ('ply\n'
            'format {} 1.0\n'
            'element vertex {}\n'
            'property float x\n'
            'property float y\n'
            'property float z\n'
            'end_header\n').format(encoding, count)


def write_ply(file_path, cloud, encoding=BINARY):
    """
    Write a cloud as PLY; coordinates are stored as float32

    :param file_path: destination
    :param cloud: PointCloud or (N, 3) array
    :param encoding: ASCII or BINARY
    :raises SessionIOError: if the file cannot be written
    """
    points = cloud.points if hasattr(cloud, 'points') else np.asarray(cloud, dtype=np.float64).reshape(-1, 3)
    data = np.ascontiguousarray(points, dtype='<f4')
    try:
        with open(file_path, 'wb') as fout:
            fout.write(_header(data.shape[0], encoding).encode('ascii'))
            if encoding == BINARY:
                fout.write(data.tobytes())
            elif encoding == ASCII:
                for row in data:
                    fout.write('{} {} {}\n'.format(*(repr(float(v)) for v in row)).encode('ascii'))
            else:
                raise ValueError('unknown PLY encoding {}'.format(encoding))
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to write PLY file {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))


def _parse_header(fin, file_path):
    if fin.readline().strip() != b'ply':
        raise ParseError('{}: missing ply magic'.format(file_path))
    encoding = None
    count = None
    properties = []
    while True:
        line = fin.readline()
        if not line:
            raise ParseError('{}: unterminated header'.format(file_path))
        words = line.decode('ascii', errors='replace').split()
        if not words or words[0] in ('comment', 'obj_info'):
            continue
        if words[0] == 'end_header':
            break
        if words[0] == 'format':
            if len(words) != 3 or words[1] not in (ASCII, BINARY):
                raise ParseError('{}: unsupported format {}'.format(file_path, ' '.join(words[1:])))
            encoding = words[1]
        elif words[0] == 'element':
            if count is not None or len(words) != 3 or words[1] != 'vertex':
                raise ParseError('{}: only a single vertex element is supported'.format(file_path))
            try:
                count = int(words[2])
            except ValueError:
                raise ParseError('{}: bad vertex count {}'.format(file_path, words[2]))
        elif words[0] == 'property':
            if len(words) != 3 or words[1] not in _FLOAT_TYPES:
                raise ParseError('{}: unsupported property {}'.format(file_path, ' '.join(words[1:])))
            properties.append(words[2])
        else:
            raise ParseError('{}: unexpected header line {}'.format(file_path, ' '.join(words)))
    if encoding is None or count is None or tuple(properties) != _PROPERTIES:
        raise ParseError('{}: expected vertex element with float x, y, z'.format(file_path))
    return encoding, count


def read_ply(file_path, scan_id=0):
    """
    Read an xyz PLY file

    :param file_path: source
    :param scan_id: scan id given to the loaded cloud
    :return: PointCloud
    :raises SessionIOError: if the file cannot be read or is truncated
    :raises ParseError: for unsupported layouts
    """
    try:
        with open(file_path, 'rb') as fin:
            encoding, count = _parse_header(fin, file_path)
            body = fin.read()
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to read PLY file {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))

    if encoding == BINARY:
        expected = count * 12
        if len(body) < expected:
            raise SessionIOError(file_path, 'truncated vertex data')
        points = np.frombuffer(body[:expected], dtype='<f4').reshape(count, 3)
    else:
        rows = body.decode('ascii', errors='replace').split()
        if len(rows) < 3 * count:
            raise SessionIOError(file_path, 'truncated vertex data')
        try:
            points = np.array(rows[:3 * count], dtype=np.float32).reshape(count, 3)
        except ValueError:
            raise ParseError('{}: bad vertex value'.format(file_path))
    return PointCloud(points.astype(np.float64), scan_id)
