# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Exception types shared by the Osprey packages
"""


class ParseError(ValueError):
    """
    A file could not be parsed (bad syntax, unsupported layout)
    """


class ValidationError(ValueError):
    """
    Parsed data violates an invariant (degenerate triangle, unknown config key, ...)
    """


class FormatVersionMismatch(ValueError):
    """
    A persisted document carries a format_version this code does not read
    """

    def __init__(self, source, found, expected):
        """
        :param source: file or directory that was read
        :param found: version found in the document
        :param expected: version supported by this code
        """
        super(FormatVersionMismatch, self).__init__(
            '{}: format_version {} (expected {})'.format(source, found, expected))
        self.source = source
        self.found = found
        self.expected = expected


class SessionIOError(IOError):
    """
    Reading or writing a persisted artifact failed
    """

    def __init__(self, path, message):
        super(SessionIOError, self).__init__('{}: {}'.format(path, message))
        self.path = path
