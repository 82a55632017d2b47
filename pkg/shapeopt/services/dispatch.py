"""Command dispatch: routes a subcommand name to its command instance."""

from shapeopt.commands import (
    BaseCommand,
    CommandResult,
    InstabilityCommand,
    OptimizeCommand,
    SolveCommand,
    StabilityCommand,
    ValidateCommand,
)
from shapeopt.core.errors import PreconditionError
from shapeopt.schemas.problem import ProblemConfig

# Singleton command instances
_commands: dict[str, BaseCommand] = {
    command.name: command
    for command in (
        SolveCommand(),
        OptimizeCommand(),
        StabilityCommand(),
        InstabilityCommand(),
        ValidateCommand(),
    )
}

COMMAND_NAMES = tuple(_commands)


def get_command(name: str) -> BaseCommand:
    """Look up a command by name.

    Raises:
        PreconditionError: If the name is unknown.
    """
    command = _commands.get(name)
    if command is None:
        raise PreconditionError(f"unknown command '{name}'", known=list(COMMAND_NAMES))
    return command


def execute_command(
    name: str, config: ProblemConfig, *, checks: list[str] | None = None
) -> CommandResult:
    """Execute a command; ``checks`` restricts the acceptance suite of ``validate``."""
    command = ValidateCommand(checks) if name == "validate" and checks else get_command(name)
    return command.execute(config)
