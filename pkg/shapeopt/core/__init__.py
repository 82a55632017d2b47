"""Core: settings, logging, errors."""

from shapeopt.core.config import Settings, get_settings
from shapeopt.core.errors import (
    ConfigError,
    ConvergenceError,
    GridError,
    HypothesisError,
    PreconditionError,
    ShapeOptError,
    SolverBreakdownError,
)
from shapeopt.core.logging import DevFormatter, JsonFormatter, configure_logging

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DevFormatter",
    "GridError",
    "HypothesisError",
    "JsonFormatter",
    "PreconditionError",
    "Settings",
    "ShapeOptError",
    "SolverBreakdownError",
    "configure_logging",
    "get_settings",
]
