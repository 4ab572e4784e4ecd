# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

import numpy as np
import pytest

from chris_osprey_core.exceptions import SessionIOError
from chris_osprey_mission.exceptions import MalformedLog
from chris_osprey_mission.mission_log import (MissionLog, check_view_pairing, format_record, parse_records,
                                              read_mission_log)


def test_records_round_trip(tmp_path):
    path = str(tmp_path / 'mission.log')
    with MissionLog(path) as log:
        log.record(0.0, 'flight_start', flight=0, position=np.array([1.5, -2.0, 0.0]))
        log.record(0.02, 'tick', command=[np.float64(0.1), 0.0, 0.0, 0.0], flight=np.int64(0))
        log.record(0.02, 'scan', node=3, points=1200)
    records = read_mission_log(path)
    assert records == log.records
    assert [r['seq'] for r in records] == [0, 1, 2]
    assert records[0]['position'] == [1.5, -2.0, 0.0]
    assert type(records[1]['flight']) is int


def test_line_layout():
    line = format_record({'t': 1.25, 'seq': 4, 'event': 'nbv', 'yaw': 0.5, 'position': [1.0, 2.0, 3.0]})
    assert line == '{t: 1.25, seq: 4, event: nbv, position: [1.0, 2.0, 3.0], yaw: 0.5}'
    assert '\n' not in line


def test_time_must_not_go_back():
    log = MissionLog()
    log.record(1.0, 'tick')
    log.record(1.0, 'scan')
    with pytest.raises(MalformedLog):
        log.record(0.5, 'tick')
    assert len(log) == 2
    assert log.last_time == 1.0


def test_append_continues_sequence(tmp_path):
    path = str(tmp_path / 'mission.log')
    with MissionLog(path) as log:
        log.record(0.0, 'flight_start')
        log.record(3.0, 'flight_end')
    with MissionLog(path, append=True) as log:
        assert log.last_time == 3.0
        with pytest.raises(MalformedLog):
            log.record(2.0, 'flight_start')
        log.record(3.0, 'flight_start')
    records = read_mission_log(path)
    assert [r['seq'] for r in records] == [0, 1, 2]
    assert [r['event'] for r in records] == ['flight_start', 'flight_end', 'flight_start']


def test_malformed_lines():
    with pytest.raises(MalformedLog):
        parse_records(['{t: 0.0, event: tick}'])
    with pytest.raises(MalformedLog):
        parse_records(['not a mapping'])
    with pytest.raises(MalformedLog):
        parse_records(['{t: 0.0, seq: 0, event: tick', ''])
    with pytest.raises(MalformedLog):
        parse_records(['{t: 1.0, seq: 0, event: tick}', '{t: 0.5, seq: 1, event: tick}'])
    with pytest.raises(MalformedLog):
        parse_records(['{t: 1.0, seq: 1, event: tick}', '{t: 1.0, seq: 1, event: tick}'])
    assert parse_records(['', '{t: 1.0, seq: 0, event: tick}', '   ']) == [{'t': 1.0, 'seq': 0, 'event': 'tick'}]


def test_missing_log(tmp_path):
    with pytest.raises(SessionIOError):
        read_mission_log(str(tmp_path / 'absent.log'))


def test_view_pairing():
    log = MissionLog()
    log.record(0.0, 'nbv')
    log.record(1.0, 'arrival')
    log.record(2.0, 'nbv')
    log.record(3.0, 'no_path')
    log.record(4.0, 'nbv')
    log.record(5.0, 'battery')
    check_view_pairing(log.records)

    log.record(6.0, 'nbv')
    log.record(7.0, 'nbv')
    with pytest.raises(MalformedLog, match='seq 6'):
        check_view_pairing(log.records)


def test_unresolved_last_view():
    log = MissionLog()
    log.record(0.0, 'nbv')
    log.record(0.5, 'tick')
    with pytest.raises(MalformedLog):
        check_view_pairing(log.records)
