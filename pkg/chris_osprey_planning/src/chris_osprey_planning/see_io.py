# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Binary SEE state files, exported at the end of every flight

Layout (little endian):

    header   magic b'SEE1', format version, point count, capture count,
             view count (uint32 each)
    points   float32 x, y, z
    classes  uint8
    flags    uint8 (1 = unobservable)
    attempts uint32
    scans    int64 source scan ids
    captures int64 scan id, float32 x, y, z
    views    float32 x, y, z, yaw, int64 target (-1 when none)
"""

import struct

import numpy as np

from chris_osprey_core.exceptions import FormatVersionMismatch, ParseError, SessionIOError
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_planning.see import SeeState, View

STATE_MAGIC = b'SEE1'
STATE_FORMAT_VERSION = 1
_HEADER = struct.Struct('<4sIIII')
_CAPTURE = np.dtype([('scan', '<i8'), ('position', '<f4', (3,))])
_VIEW = np.dtype([('position', '<f4', (3,)), ('yaw', '<f4'), ('target', '<i8')])


def export_state(state, file_path):
    """
    :param state: SeeState
    :param file_path: destination
    :raises SessionIOError: if the file cannot be written
    """
    count = len(state)
    captures = np.zeros(len(state.captures), dtype=_CAPTURE)
    for row, scan_id in enumerate(sorted(state.captures)):
        captures[row] = (scan_id, state.captures[scan_id])
    views = np.zeros(len(state.views), dtype=_VIEW)
    for row, view in enumerate(state.views):
        views[row] = (view.position, view.yaw, -1 if view.target is None else view.target)
    blocks = [
        _HEADER.pack(STATE_MAGIC, STATE_FORMAT_VERSION, count, captures.shape[0], views.shape[0]),
        state.points.astype('<f4').tobytes(),
        state.classes.astype('<u1').tobytes(),
        state.unobservable.astype('<u1').tobytes(),
        state.attempts.astype('<u4').tobytes(),
        state.scan_ids.astype('<i8').tobytes(),
        captures.tobytes(),
        views.tobytes(),
    ]
    try:
        with open(file_path, 'wb') as fout:
            for block in blocks:
                fout.write(block)
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to write SEE state {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))
    Logger.get_logger().log(LoggerLevel.INFO, 'SEE state exported to {}: {}'.format(file_path, state))


class _Reader(object):

    def __init__(self, data, file_path):
        self.data = data
        self.offset = 0
        self.file_path = file_path

    def take(self, dtype, count):
        dtype = np.dtype(dtype)
        size = dtype.itemsize * count
        if self.offset + size > len(self.data):
            raise SessionIOError(self.file_path, 'truncated SEE state file')
        values = np.frombuffer(self.data, dtype=dtype, count=count, offset=self.offset).copy()
        self.offset += size
        return values


def import_state(file_path, cfg=None):
    """
    :param file_path: file written by export_state
    :param cfg: SeeConfig of the resumed mission (defaults when None)
    :return: SeeState equal to the exported one
    :raises SessionIOError: missing, unreadable or truncated file
    :raises FormatVersionMismatch: unsupported version
    :raises ParseError: not a SEE state file
    """
    try:
        with open(file_path, 'rb') as fin:
            data = fin.read()
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to read SEE state {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))
    if len(data) < _HEADER.size:
        raise SessionIOError(file_path, 'truncated SEE state file')
    magic, version, count, capture_count, view_count = _HEADER.unpack_from(data, 0)
    if magic != STATE_MAGIC:
        raise ParseError('{}: not a SEE state file'.format(file_path))
    if version != STATE_FORMAT_VERSION:
        raise FormatVersionMismatch(file_path, version, STATE_FORMAT_VERSION)

    reader = _Reader(data, file_path)
    reader.offset = _HEADER.size
    state = SeeState(cfg)
    state.points = reader.take('<f4', 3 * count).reshape(count, 3).astype(np.float64)
    state.classes = reader.take('<u1', count).astype(np.int8)
    state.unobservable = reader.take('<u1', count).astype(bool)
    state.attempts = reader.take('<u4', count).astype(np.int32)
    state.scan_ids = reader.take('<i8', count).astype(np.int64)
    for record in reader.take(_CAPTURE, capture_count):
        state.captures[int(record['scan'])] = record['position'].astype(np.float64)
    for record in reader.take(_VIEW, view_count):
        target = int(record['target'])
        state.views.append(View(record['position'].astype(np.float64), float(record['yaw']),
                                None if target < 0 else target))
    if reader.offset != len(data):
        raise ParseError('{}: {} trailing bytes'.format(file_path, len(data) - reader.offset))
    state._rebuild_index()
    Logger.get_logger().log(LoggerLevel.INFO, 'SEE state imported from {}: {}'.format(file_path, state))
    return state
