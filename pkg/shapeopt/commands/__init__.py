"""CLI subcommands, one strategy class each."""

from shapeopt.commands.base import BaseCommand, CommandResult
from shapeopt.commands.instability import InstabilityCommand
from shapeopt.commands.optimize import OptimizeCommand
from shapeopt.commands.solve import SolveCommand
from shapeopt.commands.stability import StabilityCommand
from shapeopt.commands.validate import ValidateCommand

__all__ = [
    "BaseCommand",
    "CommandResult",
    "InstabilityCommand",
    "OptimizeCommand",
    "SolveCommand",
    "StabilityCommand",
    "ValidateCommand",
]
