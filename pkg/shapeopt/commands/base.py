"""Base command interface and common types."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from shapeopt import __version__
from shapeopt.core.errors import EXIT_OK
from shapeopt.problem.hypotheses import HypothesisReport
from shapeopt.schemas.problem import ProblemConfig
from shapeopt.schemas.reports import ArtifactReport, HypothesisSummary


@dataclass
class CommandResult:
    """Result from a command execution: the JSON report plus extra artifacts by suffix."""

    report: ArtifactReport
    artifacts: dict[str, str] = field(default_factory=dict)
    exit_code: int = EXIT_OK
    table: str | None = None


class BaseCommand(ABC):
    """Base class for CLI subcommands."""

    @property
    @abstractmethod
    def name(self) -> str:
        """The subcommand this class handles."""

    @abstractmethod
    def execute(self, config: ProblemConfig) -> CommandResult:
        """Run the pipeline for a validated config."""

    def header(self, config: ProblemConfig) -> dict[str, object]:
        """Fields every report embeds."""
        return {
            "tool_version": __version__,
            "config_hash": config.config_hash(),
            "seed": config.probes.seed,
        }


def summarize_hypotheses(report: HypothesisReport) -> HypothesisSummary:
    return HypothesisSummary(
        h1=report.h1,
        h2=report.h2,
        h4=report.h4,
        n_mg=report.n_mg,
        rho_bar=report.rho_bar,
        rho_1=report.rho_1,
        rho_0=report.rho_0,
        lambda1_lb=report.lambda1_lb,
        torsion_bound=report.torsion_bound,
        sign=report.sign,
        witnesses=report.witnesses,
    )
