"""structlog configuration tests."""

import io
import json
import sys

import structlog

from src.config.logging import configure_logging
from src.config.settings import Settings

logger = structlog.get_logger(__name__)


def test_events_follow_the_current_stderr(monkeypatch):
    configure_logging(Settings(log_renderer="json"))
    first, second = io.StringIO(), io.StringIO()

    monkeypatch.setattr(sys, "stderr", first)
    logger.warning("first_event", n=1)
    monkeypatch.setattr(sys, "stderr", second)
    first.close()
    logger.warning("second_event", n=2)

    record = json.loads(second.getvalue())
    assert record["event"] == "second_event"
    assert record["n"] == 2
    assert record["level"] == "warning"


def test_level_filters_events(monkeypatch):
    configure_logging(Settings(log_level="ERROR", log_renderer="json"))
    stream = io.StringIO()
    monkeypatch.setattr(sys, "stderr", stream)

    logger.warning("dropped")
    logger.error("kept")

    assert [json.loads(line)["event"] for line in stream.getvalue().splitlines()] == ["kept"]
    configure_logging(Settings())
