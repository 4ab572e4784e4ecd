# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Exception types of mission execution and evaluation
"""


class EmptyInput(ValueError):
    """
    A metric was asked to compare an empty cloud or sequence
    """


class NoMatches(ValueError):
    """
    No reference point found a test point within the match cap
    """

    def __init__(self, cap):
        super(NoMatches, self).__init__('no reference point has a match within {} m'.format(cap))
        self.cap = cap


class MalformedLog(ValueError):
    """
    A mission log is not time ordered or misses required fields
    """


class LengthMismatch(ValueError):
    """
    Estimated and ground-truth trajectories differ in length
    """

    def __init__(self, estimated, ground_truth):
        super(LengthMismatch, self).__init__(
            'estimated trajectory has {} poses, ground truth {}'.format(estimated, ground_truth))
        self.estimated = estimated
        self.ground_truth = ground_truth


class RelocalizationTimeout(RuntimeError):
    """
    A resumed mission did not relocalize within its scan budget
    """

    def __init__(self, scans):
        super(RelocalizationTimeout, self).__init__('no relocalization after {} scans'.format(scans))
        self.scans = scans
