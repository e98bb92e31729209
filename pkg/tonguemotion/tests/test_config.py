# TongueMotion: test_config.py
# Released under the GNU Public License 3 (or higher, your choice)
# See the file COPYING for details.

from __future__ import division, absolute_import

import logging
import pytest

from tonguemotion import config
from tonguemotion.training import TrainConfig
from tonguemotion.contours import SnakeParams
from tonguemotion.evaluation import CwSsimConfig


@pytest.fixture
def user_cfg(tmpdir):
    cfg = tmpdir.join("tonguemotion.cfg")
    cfg.write("[Training]\nlr = 0.01\nhidden = 4 4\n\n[Logging]\nloglevel_console = warning\n")
    return str(cfg)

def test_bundled_defaults():
    cfg = config.TMConfigParser(filename=None)
    for section in ('Logging', 'Training', 'Snake', 'CWSSIM'):
        assert cfg.has_section(section)
    assert cfg.getfloat('Training', 'lr') == 0.001
    assert cfg.getint('Training', 'batch') == 16
    assert cfg.getlist('CWSSIM', 'orientations', float) == [0, 45, 90, 135]

def test_user_file_overrides(user_cfg):
    cfg = config.TMConfigParser(filename=user_cfg)
    assert cfg.getfloat('Training', 'lr') == 0.01
    assert cfg.getint('Training', 'batch') == 16
    assert cfg.getLogLevel('Logging', 'loglevel_console') == logging.WARNING

def test_parameters_from_user_file(user_cfg):
    cfg = config.TMConfigParser(filename=user_cfg)
    p = TrainConfig.from_config(cfg)
    assert p.lr == 0.01
    assert p.hidden == [4, 4]
    assert p.window == 8

@pytest.mark.parametrize('cls', [TrainConfig, SnakeParams, CwSsimConfig])
def test_template_matches_schema(cls):
    cfg = config.TMConfigParser(filename=None)
    assert cls.from_config(cfg) == cls()

def test_snake_defaults():
    p = SnakeParams.from_config(config.TMConfigParser(filename=None))
    assert (p.alpha, p.beta, p.gamma, p.sigma, p.iterations) == (0.1, 0.5, 1.0, 2.0, 200)
    assert p.normal_only is True

def test_get_template():
    assert config.get_template('tonguemotion.cfg').endswith('tonguemotion.cfg')
    with pytest.raises(ValueError):
        config.get_template('no_such_template.cfg')

def test_get_configuration(user_cfg):
    try:
        cfg = config.get_configuration(user_cfg)
        assert config.cfg is cfg
        assert config.loglevel_console == logging.WARNING
    finally:
        config.get_configuration()
