"""
Tests for src/jetbig/config.py and src/jetbig/log_config.py
"""
import logging
from fractions import Fraction

import pytest
from pydantic import ValidationError

from jetbig.config import Settings, get_settings
from jetbig.log_config import configure_logging


class TestSettings:

    def test_defaults(self):
        settings = Settings(_env_file=None)
        assert settings.threads == 1
        assert settings.d_max == 60
        assert settings.s_prime_l_bound == "cn"
        assert settings.witness_step_value == Fraction(1, 20)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("JETBIG_THREADS", "4")
        monkeypatch.setenv("JETBIG_WITNESS_STEP", "1/8")
        settings = get_settings()
        assert settings.threads == 4
        assert settings.witness_step_value == Fraction(1, 8)

    def test_cached(self):
        assert get_settings() is get_settings()

    def test_log_level_normalized(self):
        assert Settings(_env_file=None, log_level="debug").log_level == "DEBUG"

    @pytest.mark.parametrize("field,value", [
        ("threads", 0),
        ("d_max", 4),
        ("log_level", "chatty"),
        ("witness_step", "0"),
        ("witness_step", "abc"),
        ("s_prime_l_bound", "2n"),
    ])
    def test_rejects(self, field, value):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, **{field: value})


class TestConfigureLogging:

    def test_stderr_only(self, quiet_logs):
        configure_logging("", "info")
        logger = logging.getLogger("jetbig")
        assert logger.level == logging.INFO
        assert len(logger.handlers) == 1
        assert not logger.propagate

    def test_file_handler(self, quiet_logs, tmp_path):
        log_dir = tmp_path / "logs"
        configure_logging(str(log_dir), "DEBUG")
        logging.getLogger("jetbig.test").debug("hello from the test")
        for handler in logging.getLogger("jetbig").handlers:
            handler.flush()
        text = (log_dir / "jetbig.log").read_text(encoding="utf-8")
        assert "hello from the test" in text
        assert "jetbig.test" in text

    def test_reconfigure_replaces_handlers(self, quiet_logs, tmp_path):
        configure_logging(str(tmp_path), "WARNING")
        configure_logging(str(tmp_path), "WARNING")
        assert len(logging.getLogger("jetbig").handlers) == 2
