"""Log formatting for the CLI.

Two renderings of the same structured record: JSON lines for batch runs and
log collectors, a pipe-delimited line for a terminal. Solver state goes into
``extra`` so it stays machine-readable:

    logger.info("Picard converged", extra={"iterations": 12, "increment": 3e-11})
"""

from datetime import datetime, timezone
import json
import logging
import sys
from typing import Any, TextIO

import numpy as np

# Pinned regardless of the root level.
DEFAULT_LOGGER_LEVELS: dict[str, str] = {
    "py.warnings": "WARNING",
    "concurrent.futures": "WARNING",
}

_BUILTIN_ATTRS = frozenset(
    logging.LogRecord("", logging.NOTSET, "", 0, "", (), None).__dict__
) | {"message", "asctime", "taskName"}


def _as_level(level: str | int) -> int:
    return level if isinstance(level, int) else logging.getLevelName(level.upper())


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def _short(value: Any) -> str:
    if isinstance(value, float | np.floating):
        return f"{float(value):.6g}"
    if isinstance(value, np.ndarray):
        return np.array2string(value, precision=6, separator=",")
    return str(value)


class _StructuredFormatter(logging.Formatter):
    """Shared access to the ``extra`` fields of a record."""

    @staticmethod
    def extras(record: logging.LogRecord) -> dict[str, Any]:
        return {
            key: value
            for key, value in vars(record).items()
            if key not in _BUILTIN_ATTRS and value is not None
        }


class JsonFormatter(_StructuredFormatter):
    """One JSON object per record; numpy values become plain numbers and lists."""

    def format(self, record: logging.LogRecord) -> str:
        payload: dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            **self.extras(record),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=_jsonable)


class DevFormatter(_StructuredFormatter):
    """Terminal formatter.

    2026-01-15 10:23:45 | INFO     | shapeopt.services.elliptic | Picard converged  iterations=12
    """

    def format(self, record: logging.LogRecord) -> str:
        stamp = datetime.fromtimestamp(record.created).strftime("%Y-%m-%d %H:%M:%S")
        parts = [f"{stamp} | {record.levelname:<8} | {record.name} | {record.getMessage()}"]
        extras = self.extras(record)
        if extras:
            parts.append(" ".join(f"{key}={_short(value)}" for key, value in extras.items()))
        line = "  ".join(parts)

        if not record.exc_info:
            return line
        trace = self.formatException(record.exc_info).splitlines()
        return "\n".join([line, *(f"  {text}" for text in trace)])


def configure_logging(
    level: str | int = "INFO",
    *,
    environment: str = "production",
    stream: TextIO | None = None,
    logger_levels: dict[str, str | int] | None = None,
) -> None:
    """Install a single stream handler on the root logger.

    Output goes to stderr unless ``stream`` is given; stdout carries command
    output such as the ``validate`` table. ``environment="development"``
    selects `DevFormatter`, anything else `JsonFormatter`. ``logger_levels``
    extends `DEFAULT_LOGGER_LEVELS`.
    """
    root = logging.getLogger()
    root.setLevel(_as_level(level))
    for existing in list(root.handlers):
        root.removeHandler(existing)

    handler = logging.StreamHandler(sys.stderr if stream is None else stream)
    handler.setFormatter(DevFormatter() if environment == "development" else JsonFormatter())
    root.addHandler(handler)

    logging.captureWarnings(True)
    for name, logger_level in {**DEFAULT_LOGGER_LEVELS, **(logger_levels or {})}.items():
        logging.getLogger(name).setLevel(_as_level(logger_level))


__all__ = [
    "DEFAULT_LOGGER_LEVELS",
    "DevFormatter",
    "JsonFormatter",
    "configure_logging",
]
