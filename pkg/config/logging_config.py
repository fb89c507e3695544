import atexit
import logging
import sys
from typing import Optional, TextIO

import structlog

from config.settings import settings

# Log file opened by the last configure_logging call
_log_stream: Optional[TextIO] = None


def _close_log_stream() -> None:
    global _log_stream
    if _log_stream is not None and not _log_stream.closed:
        _log_stream.close()
    _log_stream = None


def configure_logging(
    level: Optional[str] = None,
    json_output: Optional[bool] = None,
    log_file: Optional[str] = None,
) -> None:
    """Configure structlog for the toolkit (stderr or LOG_FILE, never stdout)"""
    global _log_stream
    level_name = (level or settings.LOG_LEVEL or "INFO").upper()
    numeric_level = getattr(logging, level_name, logging.INFO)
    use_json = settings.LOG_JSON if json_output is None else json_output
    target = log_file or settings.LOG_FILE

    _close_log_stream()
    stream: TextIO = sys.stderr
    if target:
        _log_stream = stream = open(target, "a", encoding="utf-8")

    renderer = (
        structlog.processors.JSONRenderer()
        if use_json
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        logger_factory=structlog.PrintLoggerFactory(file=stream),
        cache_logger_on_first_use=False,
    )


atexit.register(_close_log_stream)


__all__ = ["configure_logging"]
