"""Logging setup: one labelled stderr handler per run, plus an optional file."""

import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

LOG_FORMAT = "[%(asctime)s] [%(name)s] [%(run_label)s] [%(levelname)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class RunLabelFilter(logging.Filter):
    """Stamps the current command or experiment name on every record."""

    def __init__(self, run_label: str):
        super().__init__()
        self.run_label = run_label

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_label = self.run_label
        return True


def _owned(handler: logging.Handler) -> bool:
    return getattr(handler, "_weakloc", False)


def setup_logger(
    name: str,
    log_file: Optional[Path] = None,
    level: int = logging.INFO,
    run_label: str = "run",
    stream: Optional[TextIO] = None,
) -> logging.Logger:
    """
    Configure ``name`` for one run.

    Handlers installed by an earlier call are closed and replaced, so a
    second command in the same process logs under its own label and
    stream. Handlers added by other code are left alone. The console
    handler writes to stderr unless ``stream`` is given; stdout carries
    command summaries only.

    Args:
        name: Logger name
        log_file: Optional log file (parent directories are created)
        level: Logging level
        run_label: Command or experiment name shown in every line
        stream: Console stream override

    Returns:
        The configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    for handler in [h for h in logger.handlers if _owned(h)]:
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    label = RunLabelFilter(run_label)
    handlers: list = [logging.StreamHandler(stream or sys.stderr)]
    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))

    for handler in handlers:
        handler._weakloc = True
        handler.setLevel(level)
        handler.setFormatter(formatter)
        handler.addFilter(label)
        logger.addHandler(handler)
    return logger


def level_from_verbosity(verbosity: int) -> int:
    """Map a -v count to a logging level (0 -> WARNING, 1 -> INFO, 2+ -> DEBUG)."""
    if verbosity <= 0:
        return logging.WARNING
    if verbosity == 1:
        return logging.INFO
    return logging.DEBUG
