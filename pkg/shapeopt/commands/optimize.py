"""optimize: projected-gradient density optimization along the M schedule."""

from shapeopt.commands.base import BaseCommand, CommandResult, summarize_hypotheses
from shapeopt.problem.hypotheses import check_hypotheses
from shapeopt.problem.loader import build_problem
from shapeopt.schemas.problem import ProblemConfig
from shapeopt.schemas.reports import OptimizeReport, StageSummary
from shapeopt.services.optimizer import OptimizerSettings, optimize
from shapeopt.utils.serialization import columns_to_dat, field_to_csv, field_to_json, report_to_json


class OptimizeCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "optimize"

    def execute(self, config: ProblemConfig) -> CommandResult:
        problem = build_problem(config)
        grid = problem.grid
        hypotheses = check_hypotheses(problem.f, problem.g, problem.m, grid)
        section = config.optimizer
        settings = OptimizerSettings(
            M_schedule=tuple(section.M_schedule),
            max_iterations=section.max_iterations,
            tolerance=section.tolerance,
            armijo=section.armijo,
            initial_step_fraction=section.initial_step_fraction,
        )
        state = optimize(
            grid, problem.m, config.rho, problem.f, problem.g, settings=settings, report=hypotheses
        )

        report = OptimizeReport(
            **self.header(config),
            m=problem.m,
            rho=config.rho,
            stages=[
                StageSummary(
                    M=stage.M,
                    iterations=stage.iterations,
                    stop_reason=stage.stop_reason.value,
                    value=stage.value,
                    mass=stage.mass,
                    binariness=stage.binariness,
                )
                for stage in state.stages
            ],
            final_value=state.final.value if state.final else None,
            final_mass=state.density.mass,
            mass_gap=state.mass_gap,
            stalled=state.stalled,
            binariness_flags=state.binariness_flags,
            hypotheses=summarize_hypotheses(hypotheses),
        )
        history = state.history
        return CommandResult(
            report=report,
            artifacts={
                "csv": field_to_csv(state.density.values, grid),
                "dat": columns_to_dat(
                    {
                        "M": [entry.M for entry in history],
                        "iteration": [entry.iteration for entry in history],
                        "value": [entry.value for entry in history],
                        "mass": [entry.mass for entry in history],
                        "binariness": [entry.binariness for entry in history],
                        "step": [entry.step for entry in history],
                    }
                ),
                "json": report_to_json(report),
                "density.json": field_to_json(state.density.values, grid, "density"),
            },
        )
