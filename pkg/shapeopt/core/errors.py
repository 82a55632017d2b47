"""Exception hierarchy shared by every pipeline.

Each exception carries an ``exit_code`` so the CLI can map failures
without inspecting messages: 1 for precondition failures, 2 for
numerical non-convergence.
"""

from typing import Any

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_NONCONVERGENCE = 2


class ShapeOptError(Exception):
    """Base exception for shapeopt errors."""

    exit_code: int = EXIT_PRECONDITION

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.details = details


class PreconditionError(ShapeOptError, ValueError):
    """Raised when an argument violates an operation's precondition."""


class GridError(PreconditionError):
    """Raised for invalid grids, shape mismatches and out-of-box geometry."""


class ConfigError(ShapeOptError):
    """Raised when a problem definition is missing or malformed."""

    def __init__(self, message: str, path: str | None = None, **details: Any) -> None:
        super().__init__(message, path=path, **details)
        self.path = path


class HypothesisError(ShapeOptError):
    """Raised when a requested computation lies outside its certified regime."""

    def __init__(self, message: str, hypothesis: str, **details: Any) -> None:
        super().__init__(message, hypothesis=hypothesis, **details)
        self.hypothesis = hypothesis


class SolverBreakdownError(ShapeOptError):
    """Raised when a direct solve fails (singular tridiagonal system)."""

    exit_code = EXIT_NONCONVERGENCE


class ConvergenceError(ShapeOptError):
    """Raised when an iterative solver hits its iteration cap."""

    exit_code = EXIT_NONCONVERGENCE

    def __init__(
        self, message: str, solver: str, iterations: int, residual: float, **details: Any
    ) -> None:
        super().__init__(
            message, solver=solver, iterations=iterations, residual=residual, **details
        )
        self.solver = solver
        self.iterations = iterations
        self.residual = residual


__all__ = [
    "EXIT_NONCONVERGENCE",
    "EXIT_OK",
    "EXIT_PRECONDITION",
    "ConfigError",
    "ConvergenceError",
    "GridError",
    "HypothesisError",
    "PreconditionError",
    "ShapeOptError",
    "SolverBreakdownError",
]
