"""Logging configuration for jetbig runs."""
import logging
import os
import sys
from logging.handlers import RotatingFileHandler

_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(log_dir: str = "", level: str = "WARNING") -> None:
    """
    Configure the jetbig logger.

    Always logs to stderr; stdout is reserved for reports. When log_dir is set,
    also writes log_dir/jetbig.log (5 MB per file, 7 backups).
    Safe to call more than once: previously attached handlers are replaced.
    """
    logger = logging.getLogger("jetbig")
    for old in list(logger.handlers):
        logger.removeHandler(old)
        old.close()

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(_FORMAT))
    logger.addHandler(console)

    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        handler = RotatingFileHandler(
            os.path.join(log_dir, "jetbig.log"),
            maxBytes=5 * 1024 * 1024,   # 5 MB
            backupCount=7,
            encoding="utf-8",
        )
        handler.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(handler)

    logger.setLevel(getattr(logging, level.upper(), logging.WARNING))
    logger.propagate = False
