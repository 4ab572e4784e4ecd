# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
The structured mission record

Every line of ``mission.log`` is one YAML flow mapping holding the mission
time ``t``, a sequence number ``seq`` and the ``event`` name, followed by
the event fields in sorted order, e.g.::

    {t: 12.4, seq: 811, event: scan, estimated: [...], flight: 0, node: 17, true: [...]}

Several events may share a time stamp; ``seq`` orders them. This record is
separate from diagnostic logging.
"""

import numbers

import numpy as np
import yaml

from chris_osprey_core.exceptions import SessionIOError
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_mission.exceptions import MalformedLog

# Events that close an NBV selection
VIEW_RESOLUTIONS = ('arrival', 'no_path', 'battery')
_LINE_WIDTH = 1 << 30


def _plain(value):
    """
    Convert numpy scalars and arrays (possibly nested) to plain python values
    """
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return value


def format_record(record):
    """
    :param record: dict with t, seq and event
    :return: the one-line text form of a record
    """
    ordered = {'t': record['t'], 'seq': record['seq'], 'event': record['event']}
    ordered.update((key, record[key]) for key in sorted(record) if key not in ordered)
    return yaml.safe_dump(ordered, default_flow_style=True, sort_keys=False, width=_LINE_WIDTH).strip()


class MissionLog(object):
    """
    Append-only, time-ordered event record of a mission
    """

    def __init__(self, file_path=None, append=False):
        """
        :param file_path: file mirrored line by line (None keeps records in memory only)
        :param append: continue an existing log (resumed missions)
        :raises SessionIOError: if the file cannot be opened
        :raises MalformedLog: if the existing log is malformed
        """
        self.records = []
        self.file_path = file_path
        self._fout = None
        self._last_t = 0.0
        self._next_seq = 0
        if file_path is None:
            return
        if append:
            previous = read_mission_log(file_path)
            if previous:
                self._last_t = previous[-1]['t']
                self._next_seq = previous[-1]['seq'] + 1
        try:
            self._fout = open(file_path, 'a' if append else 'w')
        except (IOError, OSError) as ex:
            Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to open mission log {}.'.format(file_path))
            raise SessionIOError(file_path, str(ex))

    @property
    def last_time(self):
        return self._last_t

    def record(self, t, event, **fields):
        """
        Append an event

        :param t: mission time (s), never below the previous record's
        :param event: event name
        :param fields: event data (numpy values are converted)
        :return: the stored record
        :raises MalformedLog: when t goes backwards
        """
        t = float(t)
        if t < self._last_t:
            raise MalformedLog('event {} at t={} precedes t={}'.format(event, t, self._last_t))
        entry = _plain(fields)
        entry.update({'t': t, 'seq': self._next_seq, 'event': str(event)})
        self._last_t = t
        self._next_seq += 1
        self.records.append(entry)
        if self._fout is not None:
            self._fout.write(format_record(entry) + '\n')
        return entry

    def events(self, *names):
        return [entry for entry in self.records if entry['event'] in names]

    def flush(self):
        if self._fout is not None:
            self._fout.flush()

    def close(self):
        if self._fout is not None:
            self._fout.close()
            self._fout = None

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

    def __len__(self):
        return len(self.records)


def parse_records(lines, source='mission log'):
    """
    :param lines: iterable of text lines
    :param source: name used in error messages
    :return: list of record dicts
    :raises MalformedLog: unparsable lines, missing t/seq/event or out-of-order records
    """
    records = []
    for number, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            entry = yaml.safe_load(line)
        except yaml.YAMLError as ex:
            raise MalformedLog('{}:{}: {}'.format(source, number, ex))
        if not isinstance(entry, dict) or not {'t', 'seq', 'event'} <= set(entry):
            raise MalformedLog('{}:{}: expected a mapping with t, seq and event'.format(source, number))
        if not isinstance(entry['t'], numbers.Real) or not isinstance(entry['seq'], numbers.Integral):
            raise MalformedLog('{}:{}: t must be a number and seq an integer'.format(source, number))
        if records and (entry['t'] < records[-1]['t'] or entry['seq'] <= records[-1]['seq']):
            raise MalformedLog('{}:{}: record out of order'.format(source, number))
        records.append(entry)
    return records


def read_mission_log(file_path):
    """
    :param file_path: mission.log
    :return: list of record dicts
    :raises SessionIOError: unreadable file
    :raises MalformedLog: malformed content
    """
    try:
        with open(file_path, 'r') as fin:
            lines = fin.readlines()
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to read mission log {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))
    return parse_records(lines, file_path)


def check_view_pairing(records):
    """
    Every nbv record is followed by an arrival, no_path or battery record
    before the next nbv record

    :param records: record dicts in log order
    :raises MalformedLog: naming the seq of the first unresolved selection
    """
    open_seq = None
    for entry in records:
        if entry['event'] == 'nbv':
            if open_seq is not None:
                raise MalformedLog('nbv selection seq {} was never resolved'.format(open_seq))
            open_seq = entry['seq']
        elif entry['event'] in VIEW_RESOLUTIONS:
            open_seq = None
    if open_seq is not None:
        raise MalformedLog('nbv selection seq {} was never resolved'.format(open_seq))
