"""stability: radial state, ω spectrum, verdict and mode audit on the ball."""

from shapeopt.commands.base import BaseCommand, CommandResult
from shapeopt.problem.loader import build_problem
from shapeopt.schemas.problem import ProblemConfig
from shapeopt.schemas.reports import ModeAuditSummary, ModeRow, StabilitySummary
from shapeopt.services.radial import make_radial_grid, solve_radial_state_adjoint
from shapeopt.services.stability import mode_audit, stability_verdict
from shapeopt.utils.serialization import columns_to_dat, report_to_json, spectrum_to_csv


class StabilityCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "stability"

    def execute(self, config: ProblemConfig) -> CommandResult:
        problem = build_problem(config)
        section = config.radial
        rg = make_radial_grid(section.R, section.n_r)
        rs = solve_radial_state_adjoint(rg, config.rho, problem.f, problem.g)
        verdict = stability_verdict(
            rs,
            config.rho,
            problem.f,
            problem.g,
            section.modes,
            xi_source=section.xi_source,
            workers=config.probes.workers,
        )
        audit = mode_audit(rs, config.rho, problem.f, section.modes, modes=verdict.modes)

        rows = [
            ModeRow(
                k=mode.k,
                omega=mode.omega,
                dpsi_R=mode.dpsi_R,
                dxi_R=mode.dxi_R,
                dzeta_R=mode.dzeta_R,
            )
            for mode in verdict.modes
        ]
        report = StabilitySummary(
            **self.header(config),
            rho=config.rho,
            radius=section.R,
            modes=rows,
            Lambda=verdict.Lambda,
            dphi_R=verdict.dphi_R,
            c1=verdict.c1,
            sufficient_condition=verdict.sufficient_condition,
            growth_slope=verdict.growth_slope,
            tolerance=verdict.tolerance,
            verdict=verdict.verdict.value,
            omega1=verdict.omega1,
            omega1_at_zero=verdict.omega1_at_zero,
            omega1_drift=verdict.omega1_drift,
            coercivity=verdict.coercivity,
            mode_comparison_holds=verdict.mode_comparison_holds,
            flux_bound_holds=verdict.flux_bound_holds,
            xi_source=verdict.xi_source,
            audit=ModeAuditSummary(
                min_psi=audit.min_psi,
                ordering_gap=audit.ordering_gap,
                growth_gap=audit.growth_gap,
                passed=audit.passed,
            ),
        )
        first = verdict.modes[0]
        return CommandResult(
            report=report,
            artifacts={
                "csv": spectrum_to_csv(
                    (row.k, row.omega, row.dpsi_R, row.dxi_R, row.dzeta_R) for row in rows
                ),
                "dat": columns_to_dat(
                    {
                        "r": rg.nodes,
                        "phi": rs.phi,
                        "adjoint": rs.adjoint,
                        "psi_1": first.psi,
                        "xi_1": first.xi,
                        "zeta_1": first.zeta,
                    }
                ),
                "json": report_to_json(report),
            },
        )
