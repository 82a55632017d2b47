"""Relaxed objective Ĵ_{M,ρ}(a), its adjoint and the switching function Ψ.

Discrete functional on interior nodes (A = -Δ_h):

    Ĵ(a) = h² [ ½ uᵀAu + (M/2) Σ (1-ā) u² - Σ g u ]

Adjoint:   (A + M(1-ā) + ρ f'(u)) v = ρ f(u)
Combined:  U = u/2 + v
Switching: Ψ = -M·U·u, and  dĴ(a)·h = h² Σ (P h)·Ψ  exactly, P being the
cell-to-node average.
"""

from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.optimize import brentq

from shapeopt.core.errors import GridError, PreconditionError
from shapeopt.fields.fields import DensityField, ScalarField, cell_to_node, node_to_cell_adjoint
from shapeopt.fields.grid import Grid2D
from shapeopt.fields.operators import laplacian
from shapeopt.problem.hypotheses import HypothesisReport
from shapeopt.problem.nonlinearity import NonlinearitySpec
from shapeopt.problem.source import SourceSpec
from shapeopt.services.elliptic import (
    DEFAULT_OPTIONS,
    SolverOptions,
    SolveStats,
    penalization,
    solve_linear,
    solve_semilinear,
    source_on_nodes,
)

logger = logging.getLogger(__name__)

FD_EPSILONS = (1e-4, 1e-5, 1e-6)
REFERENCE_EPSILON = 1e-5


@dataclass(frozen=True, eq=False)
class ObjectiveBundle:
    """Value of Ĵ_{M,ρ}(a) with state, adjoint, U and Ψ."""

    grid: Grid2D
    density: DensityField
    M: float
    rho: float
    value: float
    u: ScalarField
    v: ScalarField
    U: ScalarField
    psi: ScalarField
    f: NonlinearitySpec = field(repr=False)
    g_nodes: np.ndarray = field(repr=False)
    stats: SolveStats = field(repr=False, default_factory=SolveStats)

    @property
    def cell_gradient(self) -> np.ndarray:
        """Gradient with respect to cell densities in the h²-weighted inner product."""
        return node_to_cell_adjoint(self.psi, self.grid)


def objective_value(
    grid: Grid2D, a: DensityField, M: float, u: ScalarField, g_nodes: np.ndarray
) -> float:
    """Ĵ from a stored state, with the Dirichlet term as the discrete form uᵀAu."""
    values = u.values.ravel()
    dirichlet = float(values @ (laplacian(grid) @ values))
    penalty = float(np.sum(penalization(grid, a, M).ravel() * values**2))
    work = float(np.sum(g_nodes.ravel() * values))
    return grid.h**2 * (0.5 * dirichlet + 0.5 * penalty - work)


def evaluate_objective(
    grid: Grid2D,
    a: DensityField,
    M: float,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec | np.ndarray,
    *,
    report: HypothesisReport | None = None,
    options: SolverOptions = DEFAULT_OPTIONS,
) -> ObjectiveBundle:
    """Evaluate Ĵ_{M,ρ}(a) and assemble v, U and Ψ.

    Raises:
        HypothesisError: If ρ is not below ρ̄.
        ConvergenceError: Propagated from the solvers.
    """
    stats = SolveStats()
    g_nodes = source_on_nodes(g, grid)
    u = solve_semilinear(grid, a, M, rho, f, g_nodes, report=report, options=options, stats=stats)

    if rho == 0.0 or f.is_zero:
        v = ScalarField.zeros(grid)
    else:
        coefficient = penalization(grid, a, M) + rho * f.evaluate(u.values, 1)
        v = solve_linear(grid, coefficient, rho * f.evaluate(u.values, 0), options=options)

    combined = 0.5 * u.values + v.values
    psi = -M * combined * u.values
    value = objective_value(grid, a, M, u, g_nodes)
    logger.debug("Evaluated objective", extra={"value": value, "M": M, "rho": rho})
    return ObjectiveBundle(
        grid=grid,
        density=a,
        M=M,
        rho=rho,
        value=value,
        u=u,
        v=v,
        U=ScalarField(grid, combined),
        psi=ScalarField(grid, psi),
        f=f,
        g_nodes=g_nodes,
        stats=stats,
    )


def energy_identity_residual(bundle: ObjectiveBundle) -> float:
    """Relative gap between Ĵ and -½∫g u - (ρ/2)∫u f(u)."""
    grid = bundle.grid
    u = bundle.u.values
    identity = grid.h**2 * (
        -0.5 * float(np.sum(bundle.g_nodes * u))
        - 0.5 * bundle.rho * float(np.sum(u * bundle.f.evaluate(u, 0)))
    )
    scale = max(abs(bundle.value), abs(identity), np.finfo(float).tiny)
    return abs(bundle.value - identity) / scale


def directional_derivative(bundle: ObjectiveBundle, h: np.ndarray) -> float:
    """⟨dĴ(a), h⟩ = ∫ h·Ψ with h averaged to the nodes.

    Raises:
        GridError: If h is not a cell array on the bundle's grid.
    """
    direction = np.asarray(h, dtype=float)
    if direction.shape != bundle.grid.cell_shape:
        raise GridError(
            "perturbation does not match grid",
            expected=bundle.grid.cell_shape,
            actual=direction.shape,
        )
    nodal = cell_to_node(direction, bundle.grid)
    return float(bundle.grid.h**2 * np.sum(nodal * bundle.psi.values))


@dataclass(frozen=True)
class GradientTrial:
    """One analytic-versus-difference comparison."""

    trial: int
    analytic: float
    differences: dict[float, float]
    relative_errors: dict[float, float]
    one_sided: bool

    @property
    def best_relative_error(self) -> float:
        return min(self.relative_errors.values())


@dataclass(frozen=True)
class GradientCheckReport:
    trials: list[GradientTrial]
    seed: int

    @property
    def max_relative_error(self) -> float:
        return max(t.best_relative_error for t in self.trials)

    @property
    def max_error_at_reference(self) -> float:
        return max(t.relative_errors.get(REFERENCE_EPSILON, np.inf) for t in self.trials)

    @property
    def one_sided_trials(self) -> int:
        return sum(t.one_sided for t in self.trials)


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-14)


def _random_direction(
    a: np.ndarray, rng: np.random.Generator, eps_max: float
) -> tuple[np.ndarray, bool]:
    """Random h with Σh = 0, pointing inward at active bounds.

    Free cells move by at most half their distance to 0 or 1 at ``eps_max``.
    The inward entries are balanced by a common shift of the free cells, found
    by root finding on the clipped sum; when the free cells lack the room, the
    inward entries are scaled down first. Without free cells h cannot be
    mean-free and only points inward.
    """
    h = rng.standard_normal(a.shape)
    lower = a <= 0.0
    upper = a >= 1.0
    h[lower] = np.abs(h[lower])
    h[upper] = -np.abs(h[upper])
    one_sided = bool(lower.any() or upper.any())
    free = ~(lower | upper)
    if not free.any():
        return h, one_sided

    room = 0.5 * np.minimum(a[free], 1.0 - a[free]) / eps_max
    capacity = float(room.sum())
    inward = float(h[~free].sum())
    if abs(inward) > capacity:
        h[~free] *= capacity / abs(inward)
        inward = float(h[~free].sum())

    centered = h[free] - h[free].mean()

    def excess(shift: float) -> float:
        return float(np.clip(centered + shift, -room, room).sum()) + inward

    reach = float(np.abs(centered).max() + room.max())
    shift = brentq(excess, -reach, reach, xtol=1e-14) if excess(0.0) != 0.0 else 0.0
    h[free] = np.clip(centered + shift, -room, room)
    return h, one_sided


def gradient_check(
    grid: Grid2D,
    a: DensityField,
    M: float,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec | np.ndarray,
    trials: int,
    *,
    seed: int = 0,
    epsilons: tuple[float, ...] = FD_EPSILONS,
    options: SolverOptions | None = None,
) -> GradientCheckReport:
    """Compare ⟨dĴ(a), h⟩ with central differences (one-sided at active bounds).

    Solves run at tightened tolerances so that solver noise stays below the
    difference truncation error.
    """
    if trials < 1:
        raise PreconditionError("gradient check needs at least one trial", trials=trials)
    options = options or SolverOptions(cg_rtol=1e-12, picard_tolerance=1e-13)
    rng = np.random.default_rng(seed)
    base = evaluate_objective(grid, a, M, rho, f, g, options=options)
    eps_max = max(epsilons)

    results: list[GradientTrial] = []
    for trial in range(trials):
        h, one_sided = _random_direction(a.values, rng, eps_max)
        analytic = directional_derivative(base, h)
        differences: dict[float, float] = {}
        for eps in epsilons:
            plus = evaluate_objective(
                grid, DensityField(grid, a.values + eps * h), M, rho, f, g, options=options
            ).value
            if one_sided:
                differences[eps] = (plus - base.value) / eps
            else:
                minus = evaluate_objective(
                    grid, DensityField(grid, a.values - eps * h), M, rho, f, g, options=options
                ).value
                differences[eps] = (plus - minus) / (2.0 * eps)
        errors = {eps: _relative(analytic, fd) for eps, fd in differences.items()}
        results.append(GradientTrial(trial, analytic, differences, errors, one_sided))
        logger.debug(
            "Gradient trial",
            extra={"trial": trial, "analytic": analytic, "best_error": min(errors.values())},
        )

    report = GradientCheckReport(results, seed)
    logger.info(
        "Gradient check finished",
        extra={
            "trials": trials,
            "max_relative_error": report.max_relative_error,
            "one_sided_trials": report.one_sided_trials,
            "seed": seed,
        },
    )
    return report


__all__ = [
    "FD_EPSILONS",
    "GradientCheckReport",
    "GradientTrial",
    "ObjectiveBundle",
    "directional_derivative",
    "energy_identity_residual",
    "evaluate_objective",
    "gradient_check",
    "objective_value",
]
