"""Linear and semilinear Dirichlet solves on the box.

solve_linear:      -Δ_h u + c·u = rhs        (five-point stencil, preconditioned CG)
solve_semilinear:  -Δ_h u + M(1-ā)u + ρ f(u) = g   (Picard fixed point over solve_linear)
"""

from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import cg

from shapeopt.core.errors import ConvergenceError, GridError, HypothesisError
from shapeopt.fields.fields import DensityField, ScalarField, cell_to_node
from shapeopt.fields.grid import Grid2D
from shapeopt.fields.operators import laplacian
from shapeopt.problem.hypotheses import HypothesisReport, lambda1_lower_bound, rho_bar
from shapeopt.problem.nonlinearity import NonlinearitySpec
from shapeopt.problem.source import SourceSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and caps shared by the linear and semilinear solvers."""

    cg_rtol: float = 1e-10
    cg_max_iterations: int = 20_000
    picard_tolerance: float = 1e-10
    picard_max_iterations: int = 500
    # c >= -(1 - coefficient_margin)·λ₁ keeps the operator positive definite
    coefficient_margin: float = 1e-2


DEFAULT_OPTIONS = SolverOptions()


@dataclass
class SolveStats:
    """Per-solve record: Picard increments, CG work and contraction ratios."""

    picard_iterations: int = 0
    increments: list[float] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    cg_iterations: list[int] = field(default_factory=list)
    contraction_ratios: list[float] = field(default_factory=list)
    bound_violation: str | None = None

    def rows(self) -> list[tuple[int, float, float]]:
        """(iteration, increment, residual) rows for the convergence log."""
        return [
            (i + 1, inc, res)
            for i, (inc, res) in enumerate(zip(self.increments, self.residuals, strict=False))
        ]


def _as_nodal(values: ScalarField | np.ndarray | float, grid: Grid2D, name: str) -> np.ndarray:
    if isinstance(values, ScalarField):
        if values.grid != grid:
            raise GridError(f"{name} lives on another grid")
        return np.asarray(values.values)
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return np.full(grid.node_shape, float(arr))
    if arr.shape != grid.node_shape:
        raise GridError(f"{name} does not match grid", expected=grid.node_shape, actual=arr.shape)
    return arr


def solve_linear(
    grid: Grid2D,
    c: ScalarField | np.ndarray | float,
    rhs: ScalarField | np.ndarray,
    *,
    options: SolverOptions = DEFAULT_OPTIONS,
    x0: np.ndarray | None = None,
    stats: SolveStats | None = None,
) -> ScalarField:
    """Solve -Δ_h u + c·u = rhs with zero Dirichlet data.

    Raises:
        HypothesisError: If c drops below -(1 - margin)·λ₁ somewhere.
        ConvergenceError: If CG does not reach the relative residual in time.
    """
    coefficient = _as_nodal(c, grid, "coefficient")
    b = _as_nodal(rhs, grid, "right-hand side").ravel()

    floor = -(1.0 - options.coefficient_margin) * lambda1_lower_bound(grid)
    c_min = float(coefficient.min(initial=0.0))
    if c_min < floor:
        raise HypothesisError(
            "coefficient below the maximum-principle bound",
            "max_principle",
            c_min=c_min,
            bound=floor,
        )

    if not np.any(b):
        if stats is not None:
            stats.residuals.append(0.0)
            stats.cg_iterations.append(0)
        return ScalarField.zeros(grid)

    operator = (laplacian(grid) + sp.diags(coefficient.ravel())).tocsr()
    preconditioner = sp.diags(1.0 / operator.diagonal())

    iterations = 0

    def _count(_: np.ndarray) -> None:
        nonlocal iterations
        iterations += 1

    start = None if x0 is None else np.asarray(x0, dtype=float).ravel()
    solution, info = cg(
        operator,
        b,
        x0=start,
        rtol=options.cg_rtol,
        atol=0.0,
        maxiter=options.cg_max_iterations,
        M=preconditioner,
        callback=_count,
    )
    residual = float(np.linalg.norm(b - operator @ solution) / np.linalg.norm(b))
    if info != 0:
        logger.error(
            "CG did not converge",
            extra={"iterations": iterations, "residual": residual, "n": grid.cells_per_side},
        )
        raise ConvergenceError(
            "conjugate gradient hit its iteration cap",
            solver="cg",
            iterations=iterations,
            residual=residual,
        )
    if stats is not None:
        stats.residuals.append(residual)
        stats.cg_iterations.append(iterations)
    logger.debug("CG converged", extra={"iterations": iterations, "residual": residual})
    return ScalarField(grid, solution.reshape(grid.node_shape))


def penalization(grid: Grid2D, a: DensityField, M: float) -> np.ndarray:
    """Nodal coefficient M(1 - ā) of the relaxed problem."""
    return M * (1.0 - cell_to_node(a, grid))


def source_on_nodes(g: SourceSpec | np.ndarray, grid: Grid2D) -> np.ndarray:
    if isinstance(g, SourceSpec):
        return g.on_nodes(grid)
    return _as_nodal(g, grid, "source")


def _check_bounds(
    u: ScalarField, g_nodes: np.ndarray, rho: float, report: HypothesisReport, stats: SolveStats
) -> None:
    """0 <= u <= N_mg wherever the comparison argument applies."""
    nonneg_regime = bool(np.all(g_nodes >= 0.0)) and (
        report.h2 or (report.h1 and report.rho_1 is not None and rho < report.rho_1)
    )
    lower_ok = not nonneg_regime or float(u.values.min(initial=0.0)) >= -1e-10
    upper_ok = u.sup_norm <= report.n_mg * (1.0 + 1e-8)
    if not (lower_ok and upper_ok):
        stats.bound_violation = "lower" if not lower_ok else "upper"
        logger.warning(
            "State leaves the sup-norm bound",
            extra={
                "u_min": float(u.values.min()),
                "u_max": float(u.values.max()),
                "n_mg": report.n_mg,
            },
        )


def solve_semilinear(
    grid: Grid2D,
    a: DensityField,
    M: float,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec | np.ndarray,
    *,
    report: HypothesisReport | None = None,
    options: SolverOptions = DEFAULT_OPTIONS,
    stats: SolveStats | None = None,
) -> ScalarField:
    """Relaxed state u_{M,ρ,a}: Picard iteration u <- solve_linear(M(1-ā), g - ρ f(u)).

    With ρ = 0 a single linear solve is returned.

    Raises:
        HypothesisError: If ρ is not below the contraction threshold ρ̄.
        ConvergenceError: If Picard or CG hit their iteration caps.
    """
    if a.grid != grid:
        raise GridError("density lives on another grid")
    if M < 0:
        raise HypothesisError("penalization M must be non-negative", "penalization", M=M)
    bar = report.rho_bar if report is not None else rho_bar(f, lambda1_lower_bound(grid))
    if rho < 0 or rho >= bar:
        raise HypothesisError(
            f"rho={rho:g} must lie in [0, rho_bar={bar:g})", "rho_bar", rho=rho, rho_bar=bar
        )

    stats = stats if stats is not None else SolveStats()
    coefficient = penalization(grid, a, M)
    g_nodes = source_on_nodes(g, grid)

    if rho == 0.0 or f.is_zero:
        u = solve_linear(grid, coefficient, g_nodes, options=options, stats=stats)
        stats.picard_iterations = 1
        stats.increments.append(u.sup_norm)
    else:
        u_values = np.zeros(grid.node_shape)
        previous_l2: float | None = None
        for iteration in range(1, options.picard_max_iterations + 1):
            rhs = g_nodes - rho * f.evaluate(u_values, 0)
            new = solve_linear(
                grid, coefficient, rhs, options=options, x0=u_values, stats=stats
            ).values
            difference = new - u_values
            increment = float(np.abs(difference).max(initial=0.0))
            l2 = float(np.linalg.norm(difference))
            noise_floor = 1e3 * options.cg_rtol * float(np.linalg.norm(new))
            if previous_l2 is not None and previous_l2 > noise_floor and l2 > noise_floor:
                stats.contraction_ratios.append(l2 / previous_l2)
            previous_l2 = l2
            stats.increments.append(increment)
            u_values = new
            logger.debug("Picard step", extra={"iteration": iteration, "increment": increment})
            if increment <= options.picard_tolerance:
                stats.picard_iterations = iteration
                break
        else:
            raise ConvergenceError(
                "Picard iteration hit its cap",
                solver="picard",
                iterations=options.picard_max_iterations,
                residual=stats.increments[-1],
            )
        u = ScalarField(grid, u_values)

    if report is not None:
        _check_bounds(u, g_nodes, rho, report, stats)
    logger.debug(
        "Semilinear solve finished",
        extra={"picard_iterations": stats.picard_iterations, "M": M, "rho": rho},
    )
    return u


__all__ = [
    "DEFAULT_OPTIONS",
    "SolveStats",
    "SolverOptions",
    "penalization",
    "solve_linear",
    "solve_semilinear",
    "source_on_nodes",
]
