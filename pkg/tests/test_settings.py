import logging

import core.logger.log as log
from settings import config


def test_config_values_are_typed():
    assert isinstance(config.ORACLE_MAX_VERTICES, int)
    assert config.ORACLE_MAX_VERTICES == 24
    assert config.LOG_LEVEL in ('DEBUG', 'INFO', 'WARNING', 'ERROR')
    assert config.CSV_DIGITS > 0


def test_logger_is_not_duplicated():
    first = log.setup_custom_logger('core.tests.sample')
    second = log.setup_custom_logger('core.tests.sample')
    assert first is second
    assert len(second.handlers) == 1


def test_set_level_reaches_existing_loggers():
    logger = log.setup_custom_logger('core.tests.levels')
    try:
        log.set_level('debug')
        assert logger.level == logging.DEBUG
    finally:
        log.set_level(config.LOG_LEVEL)
    assert logger.level == logging.getLevelName(config.LOG_LEVEL)
