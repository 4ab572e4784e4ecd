# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Utility methods
"""
import os

import yaml

from chris_osprey_core.exceptions import FormatVersionMismatch, ParseError, SessionIOError
from chris_osprey_core.utilities.logger import Logger, LoggerLevel


def create_directory_path(directory_path):
    """
    Create directory path if required
    :param directory_path:
    :return: None
    """
    if not os.path.exists(directory_path):
        Logger.get_logger().log(LoggerLevel.DEBUG, 'Creating directory path {}.'.format(directory_path))
        os.makedirs(directory_path)


def list_files_with_extension(directory_path, extension):
    """
    List the files of a directory that carry a given extension
    :param directory_path: directory to scan
    :param extension: extension including the period (e.g. '.ply')
    :return: sorted list of file names (not paths)
    :raises SessionIOError: if the directory does not exist
    """
    if not os.path.isdir(directory_path):
        raise SessionIOError(directory_path, 'invalid directory path')

    return sorted(f for f in os.listdir(directory_path)
                  if os.path.isfile(os.path.join(directory_path, f)) and f.endswith(extension))


def read_yaml_document(file_path):
    """
    Read a YAML document as plain python data
    :param file_path: path to the document
    :return: parsed document (dict)
    :raises SessionIOError: if the file cannot be read
    :raises ParseError: if the document is not a YAML mapping
    """
    try:
        with open(file_path, 'r') as fin:
            data = yaml.safe_load(fin)
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to read YAML document {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))
    except yaml.YAMLError as ex:
        raise ParseError('{}: {}'.format(file_path, ex))

    if not isinstance(data, dict):
        raise ParseError('{}: expected a YAML mapping'.format(file_path))
    return data


def write_yaml_document(file_path, data):
    """
    Write plain python data as a YAML document with sorted keys
    :param file_path: destination path
    :param data: dict of plain types
    :raises SessionIOError: if the file cannot be written
    """
    try:
        with open(file_path, 'w') as fout:
            yaml.safe_dump(data, fout, sort_keys=True, default_flow_style=False)
    except (IOError, OSError) as ex:
        Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to write YAML document {}.'.format(file_path))
        raise SessionIOError(file_path, str(ex))


def require_format_version(document, expected, source):
    """
    Check the format_version entry of a loaded document
    :param document: dict loaded from file
    :param expected: supported version
    :param source: file name used in error messages
    :raises FormatVersionMismatch: when missing or different
    """
    found = document.get('format_version')
    if found != expected:
        raise FormatVersionMismatch(source, found, expected)
