# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Rigid transforms, point clouds, neighbour search and PLY files
"""
#pylint: disable=unused-import

from chris_osprey_core.geometry.pose import Pose, compose, inverse, relative, wrap_angle
from chris_osprey_core.geometry.point_cloud import PointCloud, PointCloudBuilder, transform_cloud, concatenate
from chris_osprey_core.geometry.neighbor_index import NeighborIndex
