# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Exception types of view and motion planning
"""


class DegenerateNormal(ValueError):
    """
    Too few neighbours around a frontier point to estimate a surface normal
    """

    def __init__(self, frontier_id, neighbor_count):
        super(DegenerateNormal, self).__init__(
            'frontier {} has {} points within the resolution radius (need 4)'.format(frontier_id, neighbor_count))
        self.frontier_id = frontier_id
        self.neighbor_count = neighbor_count


class MissingDelta(KeyError):
    """
    A graph update did not provide a pose delta for a scan present in the SEE state
    """

    def __init__(self, scan_ids):
        super(MissingDelta, self).__init__('no pose delta for scans {}'.format(sorted(scan_ids)))
        self.scan_ids = sorted(scan_ids)
