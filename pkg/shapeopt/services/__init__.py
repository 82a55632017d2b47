"""Solvers and analyses: elliptic solves, relaxed objective, optimizer, probes, radial stability."""

from shapeopt.services.elliptic import SolverOptions, SolveStats, solve_linear, solve_semilinear
from shapeopt.services.objective import (
    ObjectiveBundle,
    energy_identity_residual,
    evaluate_objective,
    gradient_check,
)
from shapeopt.services.optimizer import OptimizerSettings, OptimizerState, StopReason, optimize
from shapeopt.services.radial import (
    ModeSolution,
    RadialGrid,
    RadialSolution,
    make_radial_grid,
    solve_modes,
    solve_radial_state_adjoint,
    solve_spectrum,
)
from shapeopt.services.stability import (
    PerturbationBundle,
    StabilityReport,
    Verdict,
    instability_demo,
    mode_audit,
    perturbation_slope,
    stability_verdict,
)

__all__ = [
    "ModeSolution",
    "ObjectiveBundle",
    "OptimizerSettings",
    "OptimizerState",
    "PerturbationBundle",
    "RadialGrid",
    "RadialSolution",
    "SolveStats",
    "SolverOptions",
    "StabilityReport",
    "StopReason",
    "Verdict",
    "energy_identity_residual",
    "evaluate_objective",
    "gradient_check",
    "instability_demo",
    "make_radial_grid",
    "mode_audit",
    "optimize",
    "perturbation_slope",
    "solve_linear",
    "solve_modes",
    "solve_radial_state_adjoint",
    "solve_semilinear",
    "solve_spectrum",
    "stability_verdict",
]
