import logging
import os

import pytest

from src.belief import BeliefSettings
from src.config import config
from src.oracle import OracleCaps
from src.utils import setup_logger


def test_unknown_configuration():
    with pytest.raises(ValueError):
        config.get_config('unknown_settings')
    with pytest.raises(ValueError):
        config.update_config('unknown_settings', {})


def test_defaults_are_filled():
    system = config.get_config('system_settings')
    assert system['horizon'] == 500
    assert system['enumeration'] == {'max_horizon': 6, 'max_nodes': 12}
    assert config.get_config('experiment_design')['replications'] == 30
    assert config.get_config('policy_profiles')['reference']['SC'] == ['SC:beta=1', 'SC:beta=10', 'SC:beta=100']


def test_settings_from_config():
    caps = OracleCaps.from_config()
    assert caps.cyclic_walk_slack == 2
    assert caps.max_expansions == 100_000_000
    settings = BeliefSettings.from_config()
    assert settings.bandwidth == 1.0
    assert settings.observe_start_reward is True


def test_log_directory_is_overridable():
    assert config.log_dir == os.environ['BAYESWALK_LOG_DIR']


def test_setup_logger(tmp_path):
    logger = setup_logger('oracle', log_dir=str(tmp_path), level=logging.DEBUG)
    assert logger.name == 'ORACLE'
    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 2
    logger.info('hello')
    for handler in logger.handlers:
        handler.flush()
    assert 'ORACLE - hello' in (tmp_path / 'oracle.log').read_text()

    # handlers are replaced, not stacked
    assert len(setup_logger('oracle', log_dir=str(tmp_path)).handlers) == 2


def test_setup_logger_rejects_unknown_component(tmp_path):
    with pytest.raises(ValueError):
        setup_logger('unknown', log_dir=str(tmp_path))
