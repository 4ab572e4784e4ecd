# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

import pytest

from chris_osprey_core.exceptions import ParseError, SessionIOError
from chris_osprey_core.geometry.ply import ASCII, BINARY, read_ply, write_ply
from chris_osprey_core.geometry.point_cloud import PointCloud, quantize_float32


@pytest.mark.parametrize('encoding', [ASCII, BINARY])
def test_float32_clouds_survive_exactly(tmp_path, rng, encoding):
    cloud = PointCloud(quantize_float32(rng.uniform(-30, 30, (257, 3))), scan_id=4)
    path = str(tmp_path / 'cloud.ply')
    write_ply(path, cloud, encoding)
    loaded = read_ply(path, scan_id=4)
    assert loaded == cloud


def test_written_bytes_are_deterministic(tmp_path, rng):
    cloud = PointCloud(rng.normal(size=(20, 3)))
    write_ply(str(tmp_path / 'a.ply'), cloud)
    write_ply(str(tmp_path / 'b.ply'), cloud)
    assert (tmp_path / 'a.ply').read_bytes() == (tmp_path / 'b.ply').read_bytes()


def test_empty_cloud(tmp_path):
    path = str(tmp_path / 'empty.ply')
    write_ply(path, PointCloud())
    assert len(read_ply(path)) == 0


def test_rejects_double_properties(tmp_path):
    path = tmp_path / 'double.ply'
    path.write_text('ply\nformat ascii 1.0\nelement vertex 1\nproperty double x\nproperty double y\n'
                    'property double z\nend_header\n0 0 0\n')
    with pytest.raises(ParseError):
        read_ply(str(path))


def test_rejects_faces_and_big_endian(tmp_path):
    faces = tmp_path / 'faces.ply'
    faces.write_text('ply\nformat ascii 1.0\nelement vertex 0\nproperty float x\nproperty float y\n'
                     'property float z\nelement face 0\nproperty list uchar int vertex_indices\nend_header\n')
    with pytest.raises(ParseError):
        read_ply(str(faces))
    big = tmp_path / 'big.ply'
    big.write_text('ply\nformat binary_big_endian 1.0\nelement vertex 0\nproperty float x\n'
                   'property float y\nproperty float z\nend_header\n')
    with pytest.raises(ParseError):
        read_ply(str(big))


def test_truncated_and_missing(tmp_path, rng):
    path = str(tmp_path / 'cut.ply')
    write_ply(path, PointCloud(rng.normal(size=(10, 3))))
    data = (tmp_path / 'cut.ply').read_bytes()
    (tmp_path / 'cut.ply').write_bytes(data[:-5])
    with pytest.raises(SessionIOError):
        read_ply(path)
    with pytest.raises(SessionIOError):
        read_ply(str(tmp_path / 'missing.ply'))
