# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Base Metamodels used for the configuration of every Osprey algorithm and
the Banks that hold keyed entries (pose graph nodes, place descriptors)
"""

import copy

import yaml

from chris_osprey_core.exceptions import ValidationError
from chris_osprey_core.utilities.logger import Logger, LoggerLevel


class _ConfigMetamodel(yaml.YAMLObject):
    """
    Internal Base Metamodel for algorithm configurations

    Subclasses list their fields and default values in DEFAULTS; keys not
    present in DEFAULTS are rejected so that typos in configuration files
    never silently fall back to a default.
    """
    yaml_tag = u''
    yaml_loader = yaml.SafeLoader
    yaml_dumper = yaml.SafeDumper
    DEFAULTS = {}
    HUMAN_OUTPUT_NAME = ''

    def __new__(cls, **kwargs):
        """
        Constructs a new instance of the Config Metamodel with all
        defaults assigned

        :param kwargs: the keyword arguments to construct a new
            Config Metamodel from
        :type kwargs: dict{str: value}
        :return: the constructed Config Metamodel
        :rtype: _ConfigMetamodel
        """
        #pylint: disable=unused-argument
        self = super(_ConfigMetamodel, cls).__new__(cls)
        for key, value in cls.DEFAULTS.items():
            self.__setattr__(key, copy.deepcopy(value))
        return self

    def __init__(self, **kwargs):
        """
        Creates a new instance of the Config Metamodel using keyword
        arguments (for the purposes of loading from YAML)

        :param kwargs: overrides of the default values
        :type kwargs: dict{str: value}
        :raises ValidationError: for unknown keys or invalid values
        """
        self.update_attributes(**kwargs)

    @classmethod
    def from_yaml(cls, loader, node):
        """
        Construct through __init__ so tagged documents are validated too
        """
        value = loader.construct_mapping(node, deep=True)
        return cls(**value)

    @classmethod
    def to_yaml(cls, dumper, data):
        """
        Represent as a tagged mapping of the plain field values
        """
        return dumper.represent_mapping(cls.yaml_tag, data.to_dict())

    @classmethod
    def from_dict(cls, data):
        """
        Build a configuration from a plain dictionary (e.g. a YAML section)

        :param data: field values; None yields the defaults
        :type data: dict or None
        :return: validated configuration
        """
        if data is None:
            return cls()
        if not isinstance(data, dict):
            raise ValidationError('{} expects a mapping, got {}'.format(cls.__name__, type(data).__name__))
        return cls(**data)

    def to_dict(self):
        """
        :return: plain dictionary of all field values
        :rtype: dict{str: value}
        """
        return {key: copy.deepcopy(self.__getattribute__(key)) for key in self.DEFAULTS}

    def copy(self, **overrides):
        """
        :param overrides: fields to change in the copy
        :return: new validated instance
        """
        data = self.to_dict()
        data.update(overrides)
        return self.__class__(**data)

    @staticmethod
    def _coerce(key, default, value):
        """
        Convert a loaded value to the type of its default
        """
        if value is None or default is None:
            return value
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise ValidationError('{} must be true or false, got {!r}'.format(key, value))
            return value
        if isinstance(default, int):
            if isinstance(value, bool) or int(value) != value:
                raise ValidationError('{} must be an integer, got {!r}'.format(key, value))
            return int(value)
        if isinstance(default, float):
            try:
                return float(value)
            except (TypeError, ValueError):
                raise ValidationError('{} must be a number, got {!r}'.format(key, value))
        if isinstance(default, (list, tuple)):
            if not isinstance(value, (list, tuple)):
                raise ValidationError('{} must be a list, got {!r}'.format(key, value))
            return list(value)
        return value

    def update_attributes(self, **kwargs):
        """
        Update configuration fields

        :param kwargs: field overrides
        :type kwargs: dict{str: value}
        :raises ValidationError: for unknown keys or invalid values
        """
        for key in sorted(kwargs):
            if key not in self.DEFAULTS:
                raise ValidationError('{}: unknown key "{}"'.format(self.__class__.__name__, key))
            value = self._coerce(key, self.DEFAULTS[key], kwargs[key])
            if self.__getattribute__(key) != value:
                Logger.get_logger().log(LoggerLevel.DEBUG, '{}.{} = {}'.format(
                    self.__class__.__name__, key, value))
            self.__setattr__(key, value)
        self.validate()

    def validate(self):
        """
        Check the configuration invariants; subclasses override

        :raises ValidationError: if an invariant is violated
        """
        return

    def _require(self, condition, message):
        """
        Raise ValidationError with the class name when condition is False
        """
        if not condition:
            raise ValidationError('{}: {}'.format(self.__class__.__name__, message))

    def __eq__(self, other):
        return isinstance(other, self.__class__) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def _string_rows(self):
        """
        Rows of strings (one row per line) for the human-readable
        representation of the configuration

        :return: the rows of strings
        :rtype: list[str]
        """
        name = self.HUMAN_OUTPUT_NAME or self.__class__.__name__
        rows = ['  ' + (len(name) + 2) * '-', '   {} :'.format(name)]
        for key in sorted(self.DEFAULTS):
            value = self.__getattribute__(key)
            if isinstance(value, (list, tuple)):
                rows.append('        {} :'.format(key))
                for item in value:
                    rows.append('            - {}'.format(item))
            else:
                rows.append('        {} : {}'.format(key, value))
        return rows

    def __str__(self):
        return '\n'.join(self._string_rows())


class _Bank(object):
    """
    Internal Base for Banks that hold entries keyed by integer id
    """
    HUMAN_OUTPUT_NAME = ''

    def __init__(self):
        """
        Creates an empty Bank
        """
        self.ids_to_entries = {}

    def __getitem__(self, key):
        """
        Returns the entry for the key

        :param key: the id of the desired entry
        :raises KeyError: if no entry exists for key
        """
        if key not in self.ids_to_entries:
            raise KeyError('{} has no entry {}'.format(self.__class__.__name__, key))
        return self.ids_to_entries[key]

    def __contains__(self, key):
        return key in self.ids_to_entries

    def __len__(self):
        return len(self.ids_to_entries)

    def __iter__(self):
        return iter(sorted(self.ids_to_entries))

    @property
    def keys(self):
        """
        Return sorted list of keys
        :return: list of entry keys
        """
        return sorted(self.ids_to_entries.keys())

    @property
    def items(self):
        """
        Return list of key,value tuples in key order
        :return: list of key, value tuples
        """
        return [(key, self.ids_to_entries[key]) for key in self.keys]

    def add(self, key, entry):
        """
        Add a new entry

        :param key: id of the entry
        :param entry: the entry
        :raises KeyError: if key is already present
        """
        if key in self.ids_to_entries:
            raise KeyError('{} already has entry {}'.format(self.__class__.__name__, key))
        self.ids_to_entries[key] = entry

    def replace(self, key, entry):
        """
        Replace an existing entry
        """
        if key not in self.ids_to_entries:
            raise KeyError('{} has no entry {}'.format(self.__class__.__name__, key))
        self.ids_to_entries[key] = entry

    def add_to_dot_graph(self, graph):
        """
        Adds the Bank's entries to a DOT Graph

        :param graph: the DOT Graph to add entries to
        :type graph: graphviz.Digraph
        """
        for key in self.keys:
            entry = self.ids_to_entries[key]
            if hasattr(entry, 'add_to_dot_graph'):
                entry.add_to_dot_graph(graph)

    def __str__(self):
        """
        Returns the human-readable string representation of the Bank
        and its entries

        :return: the string representation of the Bank
        :rtype: str
        """
        rows = [self.__class__.HUMAN_OUTPUT_NAME]
        rows.append('-' * (len(rows[0])))
        rows.append('')
        for key in self.keys:
            rows.append('  {} : {}'.format(key, self.ids_to_entries[key]))
        return '\n'.join(rows)
