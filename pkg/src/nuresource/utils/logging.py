"""Logging setup for the nuresource command line.

Library modules log through ``logging.getLogger(__name__)`` and never touch
handlers. The CLI calls :func:`setup_logging` once, which attaches a single
handler to the ``nuresource`` logger and stops propagation to the root
logger. Long runs usually want ``--log-file`` so engine progress survives
the terminal session.
"""

import logging
import sys
from typing import Optional

PACKAGE_LOGGER = "nuresource"

FORMATS = {
    "simple": "%(levelname)s: %(message)s",
    "detailed": "%(asctime)s %(levelname)-7s %(name)s [%(threadName)s] %(message)s",
    "debug": "%(asctime)s %(levelname)-7s %(name)s:%(funcName)s:%(lineno)d %(message)s",
    "json": (
        '{"time": "%(asctime)s", "logger": "%(name)s", "thread": "%(threadName)s", '
        '"level": "%(levelname)s", "message": "%(message)s"}'
    ),
}


def setup_logging(
    level: str = "WARNING",
    format: str = "simple",
    log_file: Optional[str] = None,
) -> logging.Logger:
    """Route package log records to stderr or to ``log_file``.

    Calling it again replaces the previous handler. Unknown levels fall
    back to WARNING and unknown formats to ``simple``.

    Returns:
        The configured package logger
    """
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
        handler.close()

    handler: logging.Handler
    if log_file:
        handler = logging.FileHandler(log_file, encoding="utf-8")
    else:
        handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(FORMATS.get(format, FORMATS["simple"])))

    package_logger.addHandler(handler)
    package_logger.setLevel(getattr(logging, level.upper(), logging.WARNING))
    package_logger.propagate = False
    return package_logger
