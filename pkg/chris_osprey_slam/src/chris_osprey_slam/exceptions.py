# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Exception types of registration, mapping and place recognition
"""


class EmptySubmap(ValueError):
    """
    No graph node lies within the submap inclusion radius
    """


class DegenerateGeometry(RuntimeError):
    """
    Fewer than three non-collinear ICP correspondences
    """

    def __init__(self, result, message='fewer than 3 non-collinear correspondences'):
        """
        :param result: IcpResult holding the prior transform, converged False
        """
        super(DegenerateGeometry, self).__init__(message)
        self.result = result


class NotConverged(RuntimeError):
    """
    An iterative solver stopped at its iteration limit; carries the best iterate
    """

    def __init__(self, result, message='iteration limit reached'):
        super(NotConverged, self).__init__(message)
        self.result = result


class IncompatibleShape(ValueError):
    """
    Descriptors with different ring or sector counts were compared
    """
