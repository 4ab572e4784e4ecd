# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

import pytest
import yaml

from chris_osprey_core.base_metamodel import _Bank, _ConfigMetamodel
from chris_osprey_core.exceptions import FormatVersionMismatch, ParseError, ValidationError
from chris_osprey_core.utilities.utility import read_yaml_document, require_format_version, write_yaml_document


class SampleConfig(_ConfigMetamodel):
    yaml_tag = u'!sample_config'
    DEFAULTS = {'radius': 1.5, 'count': 3, 'enabled': True, 'corners': [0.0, 1.0]}

    def validate(self):
        self._require(self.radius > 0.0, 'radius must be positive')


def test_defaults_and_overrides():
    config = SampleConfig(count=5)
    assert config.radius == 1.5 and config.count == 5 and config.enabled
    assert SampleConfig.from_dict(None) == SampleConfig()
    assert config.copy(radius=2).radius == 2.0


def test_unknown_key_names_key_and_class():
    with pytest.raises(ValidationError) as error:
        SampleConfig(radiuss=2.0)
    assert 'radiuss' in str(error.value) and 'SampleConfig' in str(error.value)


def test_type_and_invariant_checks():
    with pytest.raises(ValidationError):
        SampleConfig(count=2.5)
    with pytest.raises(ValidationError):
        SampleConfig(enabled='yes')
    with pytest.raises(ValidationError):
        SampleConfig(radius=-1.0)


def test_defaults_not_shared_between_instances():
    first = SampleConfig()
    first.corners.append(3.0)
    assert SampleConfig().corners == [0.0, 1.0]


def test_tagged_yaml_round_trip():
    text = yaml.safe_dump(SampleConfig(count=8))
    assert '!sample_config' in text
    assert yaml.safe_load(text) == SampleConfig(count=8)


def test_human_readable_rows():
    text = str(SampleConfig())
    assert 'radius : 1.5' in text and '- 0.0' in text


def test_bank_ordering_and_duplicates():
    bank = _Bank()
    bank.add(3, 'c')
    bank.add(1, 'a')
    assert bank.keys == [1, 3] and bank.items == [(1, 'a'), (3, 'c')]
    with pytest.raises(KeyError):
        bank.add(1, 'x')
    with pytest.raises(KeyError):
        bank[2]


def test_yaml_documents(tmp_path):
    path = str(tmp_path / 'doc.yaml')
    write_yaml_document(path, {'format_version': 1, 'b': [1, 2]})
    document = read_yaml_document(path)
    require_format_version(document, 1, path)
    with pytest.raises(FormatVersionMismatch):
        require_format_version(document, 2, path)
    (tmp_path / 'list.yaml').write_text('- 1\n- 2\n')
    with pytest.raises(ParseError):
        read_yaml_document(str(tmp_path / 'list.yaml'))
