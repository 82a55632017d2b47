"""Projected-gradient minimization of Ĵ_{M,ρ} over admissible densities.

Each M stage iterates a <- P(a - s·G) with Armijo backtracking on the
gradient-mapping decrease, then the next M is warm-started from the last
density. G is the cell gradient (Pᵀ Ψ) of the relaxed objective.
"""

from dataclasses import dataclass, field
from enum import Enum
import logging
import math

import numpy as np

from shapeopt.core.errors import GridError, PreconditionError
from shapeopt.fields.fields import DensityField, binariness
from shapeopt.fields.grid import Grid2D
from shapeopt.fields.projection import project_density
from shapeopt.problem.hypotheses import HypothesisReport
from shapeopt.problem.nonlinearity import NonlinearitySpec
from shapeopt.problem.source import SourceSpec
from shapeopt.services.elliptic import DEFAULT_OPTIONS, SolverOptions
from shapeopt.services.objective import ObjectiveBundle, evaluate_objective

logger = logging.getLogger(__name__)

MASS_SLACK = 1e-10
BINARINESS_GROWTH_LIMIT = 1.10


class StopReason(Enum):
    """Why an M stage ended."""

    CONVERGED = "converged"  # step norm below tolerance
    STATIONARY = "stationary"  # projected step is exactly zero
    STALLED = "stalled"  # no Armijo decrease within the backtrack budget
    MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class OptimizerSettings:
    """Step control and stopping rules."""

    M_schedule: tuple[float, ...] = (1e2, 1e3, 1e4)
    max_iterations: int = 500
    tolerance: float = 1e-6
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 40
    growth: float = 2.0
    initial_step_fraction: float = 0.5

    def __post_init__(self) -> None:
        schedule = self.M_schedule
        if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:], strict=False)):
            raise PreconditionError("M schedule must be non-empty and increasing", M=schedule)


@dataclass(frozen=True)
class HistoryEntry:
    """One accepted iterate (iteration 0 is the stage's starting density)."""

    M: float
    iteration: int
    value: float
    mass: float
    binariness: float
    step: float
    decrease: float = 0.0
    required_decrease: float = 0.0


@dataclass(frozen=True)
class StageReport:
    M: float
    iterations: int
    stop_reason: StopReason
    value: float
    mass: float
    binariness: float


@dataclass
class OptimizerState:
    """Result of a continuation run."""

    density: DensityField
    step: float
    M_schedule: tuple[float, ...]
    m: float
    history: list[HistoryEntry] = field(default_factory=list)
    stages: list[StageReport] = field(default_factory=list)
    binariness_flags: list[float] = field(default_factory=list)
    final: ObjectiveBundle | None = None

    @property
    def stalled(self) -> bool:
        return any(stage.stop_reason is StopReason.STALLED for stage in self.stages)

    @property
    def mass_gap(self) -> float:
        """(m - ∫a)/m on the final iterate; zero when the volume constraint saturates."""
        return (self.m - self.density.mass) / self.m


def _l2(values: np.ndarray, grid: Grid2D) -> float:
    return math.sqrt(grid.h**2 * float(np.sum(values**2)))


def _assert_feasible(a: DensityField, m: float) -> None:
    if a.mass > m + MASS_SLACK * max(1.0, m):
        raise GridError("iterate violates the mass bound", mass=a.mass, m=m)


def _run_stage(
    grid: Grid2D,
    a: DensityField,
    M: float,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec,
    m: float,
    settings: OptimizerSettings,
    options: SolverOptions,
    history: list[HistoryEntry],
) -> tuple[DensityField, ObjectiveBundle, StageReport, float]:
    bundle = evaluate_objective(grid, a, M, rho, f, g, options=options)
    gradient = bundle.cell_gradient
    scale = float(np.abs(gradient).max(initial=0.0))
    step = settings.initial_step_fraction / scale if scale > 0 else 1.0
    history.append(HistoryEntry(M, 0, bundle.value, a.mass, binariness(a), step))
    threshold = settings.tolerance * math.sqrt(grid.area)

    if scale == 0.0:
        report = StageReport(M, 0, StopReason.STATIONARY, bundle.value, a.mass, binariness(a))
        return a, bundle, report, step

    reason = StopReason.MAX_ITERATIONS
    iteration = 0
    for iteration in range(1, settings.max_iterations + 1):
        accepted = False
        for _ in range(settings.max_backtracks + 1):
            trial = project_density(a.values - step * gradient, m, grid)
            move = trial.values - a.values
            move_norm = _l2(move, grid)
            if move_norm == 0.0:
                break
            candidate = evaluate_objective(grid, trial, M, rho, f, g, options=options)
            required = settings.armijo * move_norm**2 / step
            decrease = bundle.value - candidate.value
            if decrease >= required:
                accepted = True
                break
            step *= settings.backtrack

        if move_norm == 0.0:
            reason = StopReason.STATIONARY
            iteration -= 1
            break
        if not accepted:
            reason = StopReason.STALLED
            logger.warning(
                "Armijo backtracking exhausted",
                extra={"M": M, "iteration": iteration, "step": step, "value": bundle.value},
            )
            iteration -= 1
            break

        a, bundle = trial, candidate
        _assert_feasible(a, m)
        gradient = bundle.cell_gradient
        history.append(
            HistoryEntry(
                M, iteration, bundle.value, a.mass, binariness(a), step, decrease, required
            )
        )
        step *= settings.growth
        if move_norm <= threshold:
            reason = StopReason.CONVERGED
            break

    report = StageReport(M, iteration, reason, bundle.value, a.mass, binariness(a))
    logger.info(
        "Optimizer stage finished",
        extra={
            "M": M,
            "iterations": iteration,
            "stop_reason": reason.value,
            "value": bundle.value,
            "mass": a.mass,
            "binariness": report.binariness,
        },
    )
    return a, bundle, report, step


def optimize(
    grid: Grid2D,
    m: float,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec,
    *,
    settings: OptimizerSettings | None = None,
    report: HypothesisReport | None = None,
    initial: DensityField | None = None,
    options: SolverOptions = DEFAULT_OPTIONS,
) -> OptimizerState:
    """Minimize Ĵ_{M,ρ} over {0 <= a <= 1, ∫a <= m} along the M schedule.

    Starts from the uniform density m/|D| unless ``initial`` is given.

    Raises:
        HypothesisError: If ``report`` is given and ρ is not below ρ₀.
    """
    settings = settings or OptimizerSettings()
    if report is not None:
        report.require_below(rho, "rho_0")
    if initial is None:
        initial = project_density(np.full(grid.cell_shape, min(1.0, m / grid.area)), m, grid)
    _assert_feasible(initial, m)

    state = OptimizerState(
        density=initial, step=0.0, M_schedule=tuple(settings.M_schedule), m=m
    )
    a = initial
    previous_binariness: float | None = None
    for M in settings.M_schedule:
        a, bundle, stage, step = _run_stage(
            grid, a, M, rho, f, g, m, settings, options, state.history
        )
        state.stages.append(stage)
        state.final = bundle
        state.step = step
        if previous_binariness is not None and stage.binariness > (
            BINARINESS_GROWTH_LIMIT * previous_binariness
        ):
            state.binariness_flags.append(M)
            logger.warning(
                "Binariness grew across continuation stage",
                extra={"M": M, "before": previous_binariness, "after": stage.binariness},
            )
        previous_binariness = stage.binariness

    state.density = a
    logger.info(
        "Optimization finished",
        extra={
            "value": state.final.value if state.final else None,
            "mass_gap": state.mass_gap,
            "stalled": state.stalled,
        },
    )
    return state


__all__ = [
    "HistoryEntry",
    "OptimizerSettings",
    "OptimizerState",
    "StageReport",
    "StopReason",
    "optimize",
]
