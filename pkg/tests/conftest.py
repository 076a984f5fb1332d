"""
Shared fixtures for the jetbig test suite.

Settings are cached process-wide by get_settings(); every test starts from a
clean cache so environment overrides made with monkeypatch take effect.
"""
import logging

import pytest

from jetbig.config import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def quiet_logs():
    """Detach handlers added by configure_logging during CLI tests."""
    yield
    logger = logging.getLogger("jetbig")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.propagate = True
