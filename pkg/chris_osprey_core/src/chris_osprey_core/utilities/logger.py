# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details
"""
Basic handler for logging functionality shared by every Osprey package
"""

import logging


class LoggerLevel(object):
    """
    Define different levels of logging output
    """
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR

    NAMES = {'DEBUG': DEBUG, 'INFO': INFO, 'WARNING': WARNING, 'ERROR': ERROR}

    @classmethod
    def from_name(cls, name):
        """
        Convert a threshold name (e.g. from the command line) to a level
        :param name: one of DEBUG, INFO, WARNING, ERROR (case insensitive)
        :return: logging level
        :raises KeyError: for unknown names
        """
        return cls.NAMES[name.upper()]


class Logger(object):
    """
    Define standard interface to python logging

    A single named logger is shared by all packages; the first call to
    get_logger configures the format and threshold.
    """
    INSTANCE = None
    LEVEL = LoggerLevel.INFO
    NAME = 'chris_osprey'
    FORMAT = '[%(asctime)s][%(levelname)s]-> %(message)s'
    DATE_FORMAT = '%d%b%Y %I:%M:%S %p %Z'

    def __init__(self):
        """
        Set up the logger instance
        """
        self._logger = logging.getLogger(self.NAME)
        self._file_handlers = {}

    def setup(self, level):
        """
        Set up the logger at given level
        :param level: logging level to display
        """
        if not self._logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(self.FORMAT, datefmt=self.DATE_FORMAT))
            self._logger.addHandler(handler)
        self._logger.setLevel(level)
        self._logger.propagate = False

    def set_level(self, level):
        """
        Change the threshold of an existing logger
        :param level: logging level to display
        """
        self.__class__.LEVEL = level
        self._logger.setLevel(level)

    def add_file_handler(self, file_path):
        """
        Mirror diagnostic output into a file (e.g. inside a mission directory)
        :param file_path: path of the diagnostic log file
        """
        if file_path in self._file_handlers:
            return
        handler = logging.FileHandler(file_path, mode='w')
        handler.setFormatter(logging.Formatter(self.FORMAT, datefmt=self.DATE_FORMAT))
        self._logger.addHandler(handler)
        self._file_handlers[file_path] = handler

    def remove_file_handler(self, file_path):
        """
        Stop mirroring into a file added with add_file_handler
        :param file_path: path passed to add_file_handler
        """
        handler = self._file_handlers.pop(file_path, None)
        if handler is not None:
            self._logger.removeHandler(handler)
            handler.close()

    def log(self, level, message):
        """
        log message at level
        :param level: logging level
        :param message: text string to log
        """
        self._logger.log(level, message)

    def is_enabled_for(self, level):
        """
        Check threshold before building expensive messages
        :param level: logging level
        :return: True if a message at level would be emitted
        """
        return self._logger.isEnabledFor(level)

    @classmethod
    def get_logger(cls):
        """
        Get logger instance
        """
        if cls.INSTANCE is None:
            cls.INSTANCE = cls()
            cls.INSTANCE.setup(cls.LEVEL)
        return cls.INSTANCE
