"""Tests for the log formatters and configure_logging."""

from io import StringIO
import json
import logging
import sys

import numpy as np
import pytest

from shapeopt.core import DevFormatter, JsonFormatter, configure_logging


def _record(
    msg: str,
    *,
    name: str = "shapeopt.services.elliptic",
    level: int = logging.INFO,
    exc_info=None,
    **extras: object,
) -> logging.LogRecord:
    record = logging.LogRecord(name, level, "", 0, msg, (), exc_info)
    for key, value in extras.items():
        setattr(record, key, value)
    return record


def _failing_solve() -> tuple:
    try:
        raise FloatingPointError("tridiagonal breakdown at row 17")
    except FloatingPointError:
        return sys.exc_info()


@pytest.fixture
def captured():
    """Configure logging into a buffer and restore a plain setup afterwards."""
    stream = StringIO()
    yield stream
    configure_logging(level="INFO")
    logging.getLogger("shapeopt.services.probes").setLevel(logging.NOTSET)


class TestJsonFormatter:
    def test_one_object_with_solver_extras(self) -> None:
        """Extras sit next to the standard keys on a single line."""
        text = JsonFormatter().format(_record("Picard converged", iterations=12, increment=3e-11))

        assert "\n" not in text
        parsed = json.loads(text)
        assert parsed["message"] == "Picard converged"
        assert parsed["level"] == "INFO"
        assert parsed["logger"] == "shapeopt.services.elliptic"
        assert parsed["timestamp"].endswith("+00:00")
        assert (parsed["iterations"], parsed["increment"]) == (12, 3e-11)

    def test_numpy_extras_become_plain_json(self) -> None:
        record = _record(
            "Radial state solved",
            Lambda=np.float64(-0.125),
            points=np.int64(512),
            shape=np.array([15, 15]),
        )

        parsed = json.loads(JsonFormatter().format(record))

        assert parsed["Lambda"] == -0.125
        assert parsed["points"] == 512
        assert parsed["shape"] == [15, 15]

    def test_none_extras_are_dropped(self) -> None:
        parsed = json.loads(JsonFormatter().format(_record("Stage done", coercivity=None)))

        assert "coercivity" not in parsed

    def test_exception_text(self) -> None:
        record = _record("Command failed", level=logging.ERROR, exc_info=_failing_solve())

        parsed = json.loads(JsonFormatter().format(record))

        assert "FloatingPointError" in parsed["exception"]
        assert "row 17" in parsed["exception"]


class TestDevFormatter:
    def test_pipe_delimited_with_short_floats(self) -> None:
        """Floats are cut to six significant digits."""
        record = _record(
            "Stability verdict",
            name="shapeopt.services.stability",
            verdict="stable",
            omega1=0.6981317007977318,
        )

        line = DevFormatter().format(record)

        _, level, name, rest = line.split(" | ")
        assert level.strip() == "INFO"
        assert name == "shapeopt.services.stability"
        assert rest == "Stability verdict  verdict=stable omega1=0.698132"

    def test_plain_message_has_no_trailing_space(self) -> None:
        line = DevFormatter().format(_record("Grid built", level=logging.WARNING))

        assert line.endswith("| Grid built")

    def test_traceback_is_indented(self) -> None:
        record = _record("Command failed", level=logging.ERROR, exc_info=_failing_solve())

        first, *trace = DevFormatter().format(record).split("\n")

        assert first.endswith("Command failed")
        assert any("FloatingPointError: tridiagonal breakdown" in text for text in trace)
        assert all(text.startswith("  ") for text in trace if text)


class TestConfigureLogging:
    def test_json_unless_development(self, captured: StringIO) -> None:
        configure_logging(level="INFO", stream=captured)

        logging.getLogger("shapeopt.cli").info("Artifacts written", extra={"M": 100.0, "n": 64})

        parsed = json.loads(captured.getvalue())
        assert parsed["logger"] == "shapeopt.cli"
        assert (parsed["M"], parsed["n"]) == (100.0, 64)

    def test_development_is_human_readable(self, captured: StringIO) -> None:
        configure_logging(level="INFO", environment="development", stream=captured)

        logging.getLogger("shapeopt.cli").info("Running check", extra={"check": "gradient"})

        output = captured.getvalue().strip()
        assert not output.startswith("{")
        assert output.endswith("Running check  check=gradient")

    def test_root_level_and_per_logger_overrides(self, captured: StringIO) -> None:
        """--quiet style WARNING root, with one logger raised to ERROR."""
        configure_logging(
            level="WARNING",
            stream=captured,
            logger_levels={"shapeopt.services.probes": "ERROR"},
        )

        logging.getLogger("shapeopt.cli").info("hidden")
        logging.getLogger("shapeopt.services.probes").warning("also hidden")
        logging.getLogger("shapeopt.cli").warning("Optimizer stalled")

        messages = [json.loads(line)["message"] for line in captured.getvalue().splitlines()]
        assert messages == ["Optimizer stalled"]

    def test_reconfiguring_replaces_the_handler(self, captured: StringIO) -> None:
        configure_logging(level="INFO", stream=StringIO())
        configure_logging(level="INFO", stream=captured)

        assert len(logging.getLogger().handlers) == 1
