"""instability-demo: ω_{1,ρ} < 0 for a nonnegative f with f' < -1."""

import logging

from shapeopt.commands.base import BaseCommand, CommandResult
from shapeopt.core.errors import EXIT_NONCONVERGENCE, EXIT_OK
from shapeopt.problem.loader import build_problem
from shapeopt.schemas.problem import ProblemConfig
from shapeopt.schemas.reports import InstabilityRowSummary, InstabilitySummary
from shapeopt.services.stability import instability_demo
from shapeopt.utils.serialization import report_to_json, rows_to_csv

logger = logging.getLogger(__name__)


class InstabilityCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "instability-demo"

    def execute(self, config: ProblemConfig) -> CommandResult:
        problem = build_problem(config)
        section = config.radial
        # ratios against σ only make sense with the ξ source the expansion was derived from
        demo = instability_demo(
            config.probes.rho_list,
            f=problem.f,
            g=problem.g,
            R=section.R,
            n_r=section.n_r,
            xi_source="literal",
        )
        rows = [
            InstabilityRowSummary(
                rho=row.rho,
                omega1=row.omega1,
                ratio=row.ratio,
                relative_error=row.relative_error,
                marginal=row.marginal,
                unstable=row.unstable,
            )
            for row in demo.rows
        ]
        report = InstabilitySummary(
            **self.header(config),
            rows=rows,
            sigma=demo.sigma,
            rho_threshold=demo.rho_threshold,
            all_unstable=demo.all_unstable,
            mode=demo.mode,
            normal_velocity=demo.normal_velocity,
            xi_source=demo.xi_source,
        )
        table = rows_to_csv(
            ("rho", "omega1", "ratio"),
            (
                (row.rho, row.omega1, row.ratio if row.ratio is not None else float("nan"))
                for row in rows
            ),
        )
        if not demo.all_unstable:
            missed = [row.rho for row in demo.rows if row.rho > 0.0 and not row.unstable]
            logger.error("Instability not reproduced", extra={"rhos": missed})
        return CommandResult(
            report=report,
            artifacts={"csv": table, "json": report_to_json(report)},
            exit_code=EXIT_OK if demo.all_unstable else EXIT_NONCONVERGENCE,
        )
