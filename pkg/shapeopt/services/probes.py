"""Numerical probes of the relaxed problem.

- m_continuation_probe: Ĵ_{M,ρ}(𝟙_disk) and the exterior mass of u² as M grows
- monotonicity_probe: Ĵ(a₁) >= Ĵ(a₂) on random nested pairs a₁ <= a₂
- topological_sign_field: sign of u·U inside the disk and a direct ε-hole test
- rho_scaling_probe: sup-norm distance of u_{M,ρ,a} to u_{M,0,a} against ρ
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging

import numpy as np

from shapeopt.core.errors import HypothesisError, PreconditionError
from shapeopt.fields.fields import DensityField, ScalarField, cell_to_node, disk_indicator
from shapeopt.fields.grid import Grid2D
from shapeopt.fields.projection import project_density
from shapeopt.problem.hypotheses import HypothesisReport, check_hypotheses
from shapeopt.problem.nonlinearity import NonlinearitySpec
from shapeopt.problem.source import SourceSpec, constant
from shapeopt.services.elliptic import DEFAULT_OPTIONS, SolverOptions, solve_semilinear
from shapeopt.services.objective import evaluate_objective

logger = logging.getLogger(__name__)

MONOTONICITY_SLACK = 1e-10


def loglog_fit(x: list[float], y: list[float]) -> tuple[float, float]:
    """Slope and R² of the least-squares line through (log x, log y)."""
    lx, ly = np.log(np.asarray(x)), np.log(np.asarray(y))
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r_squared


# ---------------------------------------------------------------------------
# M-continuation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuationRow:
    M: float
    value: float
    exterior_l2: float


@dataclass(frozen=True)
class ContinuationReport:
    rows: list[ContinuationRow]

    @property
    def increments(self) -> list[float]:
        values = [row.value for row in self.rows]
        return [abs(b - a) for a, b in zip(values, values[1:], strict=False)]

    @property
    def cauchy_decreasing(self) -> bool:
        inc = self.increments
        return all(b < a for a, b in zip(inc, inc[1:], strict=False))

    @property
    def exterior_decreasing(self) -> bool:
        ext = [row.exterior_l2 for row in self.rows]
        return all(b < a for a, b in zip(ext, ext[1:], strict=False))

    @property
    def final_value(self) -> float:
        return self.rows[-1].value


def exterior_l2(u: ScalarField, a: DensityField) -> float:
    """h²·Σ u² over nodes whose four neighbouring cells all have a = 0."""
    grid = u.grid
    outside = cell_to_node(a, grid) == 0.0
    return float(grid.h**2 * np.sum(u.values[outside] ** 2))


def m_continuation_probe(
    grid: Grid2D,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec,
    Ms: list[float],
    *,
    a: DensityField | None = None,
    radius: float = 1.0,
    options: SolverOptions = DEFAULT_OPTIONS,
) -> ContinuationReport:
    """Tabulate (M, Ĵ_{M,ρ}(a), ∫_{D∖disk} u²) for increasing M.

    Raises:
        PreconditionError: If Ms is not strictly increasing.
    """
    if len(Ms) < 2 or any(b <= a_ for a_, b in zip(Ms, Ms[1:], strict=False)):
        raise PreconditionError("Ms must be strictly increasing", Ms=Ms)
    a = a if a is not None else disk_indicator(grid, radius)
    rows = []
    for M in Ms:
        bundle = evaluate_objective(grid, a, M, rho, f, g, options=options)
        rows.append(ContinuationRow(M, bundle.value, exterior_l2(bundle.u, a)))
        logger.info(
            "Continuation step",
            extra={"M": M, "value": bundle.value, "exterior_l2": rows[-1].exterior_l2},
        )
    return ContinuationReport(rows)


# ---------------------------------------------------------------------------
# Relaxed monotonicity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairResult:
    trial: int
    value_small: float
    value_large: float

    @property
    def gap(self) -> float:
        """Ĵ(a₁) - Ĵ(a₂); monotonicity asks for gap >= 0."""
        return self.value_small - self.value_large

    @property
    def violated(self) -> bool:
        return self.gap < -MONOTONICITY_SLACK


@dataclass(frozen=True)
class MonotonicityReport:
    pairs: list[PairResult]
    seed: int
    rho: float
    M: float

    @property
    def violations(self) -> int:
        return sum(pair.violated for pair in self.pairs)


def nested_pair(
    grid: Grid2D, m: float, rng: np.random.Generator
) -> tuple[DensityField, DensityField]:
    """Random admissible a₁ <= a₂: shared projection shift keeps the order."""
    first = rng.uniform(0.0, 1.0, grid.cell_shape)
    second = rng.uniform(0.0, 1.0, grid.cell_shape)
    large = project_density(np.maximum(first, second), m, grid)
    small = project_density(np.minimum(first, second), m, grid)
    return DensityField(grid, np.minimum(small.values, large.values)), large


def monotonicity_probe(
    grid: Grid2D,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec,
    m: float,
    M: float,
    trials: int,
    *,
    seed: int = 0,
    report: HypothesisReport | None = None,
    workers: int | None = None,
    options: SolverOptions = DEFAULT_OPTIONS,
) -> MonotonicityReport:
    """Check Ĵ(a₁) >= Ĵ(a₂) - 1e-10 on ``trials`` random nested pairs.

    Trials run concurrently; each one draws from its own spawned seed, so
    the outcome does not depend on scheduling.

    Raises:
        HypothesisError: Unless H1 (with ρ < ρ₁) or H2 (with ρ < ρ̄) is certified.
    """
    if trials < 1:
        raise PreconditionError("monotonicity probe needs at least one trial", trials=trials)
    report = report or check_hypotheses(f, g, m, grid)
    if report.h1 and report.rho_1 is not None:
        report.require_below(rho, "rho_1")
    elif report.h2:
        report.require_below(rho, "rho_bar")
    else:
        raise HypothesisError("monotonicity needs H1 or H2", "H1/H2", witnesses=report.witnesses)

    seeds = np.random.SeedSequence(seed).spawn(trials)
    logger.info("Monotonicity probe", extra={"trials": trials, "seed": seed, "rho": rho, "M": M})

    def _trial(index: int) -> PairResult:
        rng = np.random.default_rng(seeds[index])
        small, large = nested_pair(grid, m, rng)
        value_small = evaluate_objective(grid, small, M, rho, f, g, options=options).value
        value_large = evaluate_objective(grid, large, M, rho, f, g, options=options).value
        return PairResult(index, value_small, value_large)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        pairs = list(pool.map(_trial, range(trials)))

    result = MonotonicityReport(pairs, seed, rho, M)
    if result.violations:
        logger.warning(
            "Monotonicity violations", extra={"violations": result.violations, "seed": seed}
        )
    return result


# ---------------------------------------------------------------------------
# Topological derivative sign
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TopologicalReport:
    """Nodal u·U inside the disk and the direct hole re-evaluation."""

    sign_field: ScalarField = field(repr=False)
    negative_fraction: float
    interior_nodes: int
    hole_radius: float
    value: float
    value_with_hole: float

    @property
    def hole_delta(self) -> float:
        return self.value_with_hole - self.value


def topological_sign_field(
    grid: Grid2D,
    rho: float,
    f: NonlinearitySpec,
    *,
    radius: float = 1.0,
    M: float = 1e4,
    hole_cells: int = 4,
    report: HypothesisReport | None = None,
    options: SolverOptions = DEFAULT_OPTIONS,
) -> TopologicalReport:
    """u·U on the disk 𝟙_{B(0,R)} with g ≡ 0; negative values favour punching a hole.

    Raises:
        HypothesisError: If H4 is not certified for f.
    """
    g = constant(0.0)
    a = disk_indicator(grid, radius)
    report = report or check_hypotheses(f, g, max(a.mass, grid.h**2), grid)
    if not report.h4:
        raise HypothesisError("topological sign field needs H4 (f(0) < 0, x f(x) decreasing)", "H4")

    bundle = evaluate_objective(grid, a, M, rho, f, g, report=report, options=options)
    product = bundle.u.values * bundle.U.values
    interior = cell_to_node(a, grid) == 1.0
    masked = np.where(interior, product, 0.0)
    count = int(interior.sum())
    negative = float(np.mean(product[interior] < 0.0)) if count else 0.0

    epsilon = hole_cells * grid.h
    x, y = grid.cell_centers
    holed = np.where(x**2 + y**2 < epsilon**2, 0.0, a.values)
    with_hole = evaluate_objective(
        grid, DensityField(grid, holed), M, rho, f, g, options=options
    ).value

    result = TopologicalReport(
        sign_field=ScalarField(grid, masked),
        negative_fraction=negative,
        interior_nodes=count,
        hole_radius=epsilon,
        value=bundle.value,
        value_with_hole=with_hole,
    )
    logger.info(
        "Topological sign field",
        extra={
            "negative_fraction": negative,
            "hole_delta": result.hole_delta,
            "rho": rho,
        },
    )
    return result


# ---------------------------------------------------------------------------
# Sup-norm scaling in ρ
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingReport:
    rhos: list[float]
    distances: list[float]
    slope: float
    r_squared: float


def rho_scaling_probe(
    grid: Grid2D,
    a: DensityField,
    M: float,
    rhos: list[float],
    f: NonlinearitySpec,
    g: SourceSpec,
    *,
    options: SolverOptions = DEFAULT_OPTIONS,
) -> ScalingReport:
    """Fit log ||u_{M,ρ,a} - u_{M,0,a}||_inf against log ρ."""
    if len(rhos) < 2 or min(rhos) <= 0:
        raise PreconditionError("need at least two positive rho values", rhos=rhos)
    baseline = solve_semilinear(grid, a, M, 0.0, f, g, options=options).values
    distances = [
        float(
            np.abs(solve_semilinear(grid, a, M, rho, f, g, options=options).values - baseline).max()
        )
        for rho in rhos
    ]
    slope, r_squared = loglog_fit(rhos, distances)
    logger.info("Rho scaling", extra={"slope": slope, "r_squared": r_squared})
    return ScalingReport(list(rhos), distances, slope, r_squared)


__all__ = [
    "ContinuationReport",
    "ContinuationRow",
    "MonotonicityReport",
    "PairResult",
    "ScalingReport",
    "TopologicalReport",
    "exterior_l2",
    "loglog_fit",
    "m_continuation_probe",
    "monotonicity_probe",
    "nested_pair",
    "rho_scaling_probe",
    "topological_sign_field",
]
