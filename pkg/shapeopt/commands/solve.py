"""solve: relaxed semilinear state on the ball indicator."""

import logging

from shapeopt.commands.base import BaseCommand, CommandResult, summarize_hypotheses
from shapeopt.fields.fields import disk_indicator
from shapeopt.problem.hypotheses import check_hypotheses
from shapeopt.problem.loader import build_problem
from shapeopt.schemas.problem import ProblemConfig
from shapeopt.schemas.reports import SolveReport
from shapeopt.services.objective import energy_identity_residual, evaluate_objective
from shapeopt.utils.serialization import columns_to_dat, field_to_csv, field_to_json, report_to_json

logger = logging.getLogger(__name__)


class SolveCommand(BaseCommand):
    """Solves -Δu + M(1-a)u + ρ f(u) = g for a = 𝟙_{B(0,R)} and reports Ĵ."""

    @property
    def name(self) -> str:
        return "solve"

    def execute(self, config: ProblemConfig) -> CommandResult:
        problem = build_problem(config)
        grid = problem.grid
        hypotheses = check_hypotheses(problem.f, problem.g, problem.m, grid)
        a = disk_indicator(grid, config.radial.R)
        bundle = evaluate_objective(
            grid, a, config.M, config.rho, problem.f, problem.g, report=hypotheses
        )
        stats = bundle.stats

        report = SolveReport(
            **self.header(config),
            rho=config.rho,
            M=config.M,
            value=bundle.value,
            sup_norm=bundle.u.sup_norm,
            energy_identity_residual=energy_identity_residual(bundle),
            picard_iterations=stats.picard_iterations,
            increments=stats.increments,
            contraction_ratios=stats.contraction_ratios,
            bound_violation=stats.bound_violation,
            hypotheses=summarize_hypotheses(hypotheses),
        )
        logger.info(
            "Solve finished",
            extra={"value": bundle.value, "iterations": stats.picard_iterations},
        )
        return CommandResult(
            report=report,
            artifacts={
                "csv": field_to_csv(bundle.u.values, grid),
                "dat": columns_to_dat(
                    {
                        "iteration": [row[0] for row in stats.rows()],
                        "increment": stats.increments,
                        "residual": stats.residuals,
                    }
                ),
                "json": report_to_json(report),
                "u.json": field_to_json(bundle.u.values, grid, "u"),
                "combined.json": field_to_json(bundle.U.values, grid, "U"),
                "psi.json": field_to_json(bundle.psi.values, grid, "psi"),
            },
        )
