"""structlog wiring."""

import logging
import sys

import structlog

from src.config.settings import Settings, get_settings


def _stderr_logger(*args: object) -> structlog.PrintLogger:
    """Bind to whatever ``sys.stderr`` is when the logger is created."""
    return structlog.PrintLogger(sys.stderr)


def configure_logging(settings: Settings | None = None) -> None:
    """Configure structlog with the renderer and level from settings."""
    settings = settings or get_settings()
    level = logging.getLevelName(settings.log_level)

    renderer: structlog.types.Processor
    if settings.log_renderer == "json":
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
