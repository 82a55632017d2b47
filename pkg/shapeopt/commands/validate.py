"""validate: run the acceptance suite and print a pass/fail table."""

from shapeopt.commands.base import BaseCommand, CommandResult
from shapeopt.core.errors import EXIT_NONCONVERGENCE, EXIT_OK
from shapeopt.schemas.problem import ProblemConfig
from shapeopt.schemas.reports import AcceptanceRow, ValidateReport
from shapeopt.services.acceptance import AcceptanceResult, run_acceptance
from shapeopt.utils.serialization import report_to_json


def format_table(results: list[AcceptanceResult]) -> str:
    width = max(len(result.name) for result in results)
    lines = [f"{'check':<{width}}  status  seconds  measured"]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(
            f"{result.name:<{width}}  {status:<6}  {result.seconds:7.2f}  {result.measured}"
        )
    return "\n".join(lines)


class ValidateCommand(BaseCommand):
    """Runs every acceptance check; a failed check exits with the numerical code."""

    def __init__(self, subset: list[str] | None = None) -> None:
        self.subset = subset

    @property
    def name(self) -> str:
        return "validate"

    def execute(self, config: ProblemConfig) -> CommandResult:
        results = run_acceptance(self.subset, workers=config.probes.workers)
        passed = all(result.passed for result in results)
        report = ValidateReport(
            **self.header(config),
            results=[
                AcceptanceRow(
                    name=r.name,
                    passed=r.passed,
                    measured=r.measured,
                    expected=r.expected,
                )
                for r in results
            ],
            passed=passed,
        )
        return CommandResult(
            report=report,
            artifacts={"json": report_to_json(report)},
            exit_code=EXIT_OK if passed else EXIT_NONCONVERGENCE,
            table=format_table(results),
        )
