"""Stability of the ball: spectrum verdict, mode audit, first-order expansion and instability."""

from dataclasses import dataclass, field
from enum import Enum
import logging
import math

import numpy as np
from scipy.integrate import trapezoid

from shapeopt.core.errors import HypothesisError, PreconditionError
from shapeopt.problem.hypotheses import certify_instability_hypothesis
from shapeopt.problem.nonlinearity import NonlinearitySpec, neg_exp_square, one_minus_two_x
from shapeopt.problem.source import SourceSpec, constant
from shapeopt.services.probes import loglog_fit
from shapeopt.services.radial import (
    ModeSolution,
    RadialGrid,
    RadialSolution,
    XiSource,
    boundary_derivative,
    make_radial_grid,
    profile_derivative,
    radial_integral,
    radial_rho_bar,
    solve_modes,
    solve_profile,
    solve_radial_state_adjoint,
    solve_spectrum,
)

logger = logging.getLogger(__name__)

MIN_MODES = 8
DEFAULT_MODES = 20
VERDICT_TOLERANCE = 1e-8
MODE_COMPARISON_FACTOR = 10.0
POSITIVITY_SLACK = 1e-10
ORDERING_SLACK = 1e-8
GROWTH_SLACK = 1e-6
SLOPE_TOLERANCE = 0.15
SECOND_ORDER_RATIO = 4.0
RATIO_TOLERANCE = 0.15
EXACT_THRESHOLD = 1e-10


class Verdict(str, Enum):
    STABLE = "stable"
    MARGINALLY_STABLE = "marginally-stable"
    UNSTABLE = "unstable"


# ---------------------------------------------------------------------------
# Verdict
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Spectrum ω_{1..K,ρ} with the criteria and diagnostics derived from it."""

    rho: float
    radius: float
    modes: list[ModeSolution] = field(repr=False)
    Lambda: float
    dphi_R: float
    source_integral: float
    c1: float
    sufficient_condition: bool
    growth_slope: float
    tolerance: float
    verdict: Verdict
    omega1_at_zero: float
    coercivity: float | None
    mode_comparison_holds: bool
    flux_bound_holds: bool
    xi_source: XiSource

    @property
    def spectrum(self) -> list[float]:
        return [mode.omega for mode in self.modes]

    @property
    def omega1(self) -> float:
        return self.modes[0].omega

    @property
    def omega1_drift(self) -> float:
        return abs(self.omega1 - self.omega1_at_zero)


def _growth_slope(omegas: list[float]) -> float:
    K = len(omegas)
    ks = np.arange(math.ceil(K / 2), K + 1)
    slope, _ = np.polyfit(ks.astype(float), np.asarray(omegas)[ks - 1], 1)
    return float(slope)


def _classify(omegas: list[float], tolerance: float) -> Verdict:
    lowest = min(omegas)
    if lowest < -tolerance:
        return Verdict.UNSTABLE
    if lowest <= tolerance:
        return Verdict.MARGINALLY_STABLE
    return Verdict.STABLE


def stability_verdict(
    rs: RadialSolution,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec,
    K: int = DEFAULT_MODES,
    *,
    xi_source: XiSource = "adjoint",
    workers: int | None = None,
) -> StabilityReport:
    """Compute ω_{1..K,ρ} and classify the ball.

    The verdict is unstable iff min ω_k < -tol with
    tol = 1e-8·πR·max(1, φ'(R)²); marginally stable if the minimum lies in [-tol, tol].

    Raises:
        PreconditionError: If K < 8.
    """
    if K < MIN_MODES:
        raise PreconditionError(f"need at least {MIN_MODES} modes", modes=K)
    rg = rs.grid
    R = rg.radius
    modes = solve_spectrum(rs, K, rho, f, xi_source=xi_source, workers=workers)
    omegas = [mode.omega for mode in modes]
    tolerance = VERDICT_TOLERANCE * math.pi * R * max(1.0, rs.dphi_R**2)

    source_integral = radial_integral(rg, g.at_radius(rg.nodes))
    c1 = source_integral / (math.pi * R**2) - rs.g_R
    sufficient = 2.0 * math.pi * R**2 * rs.g_R <= source_integral

    if rho == 0.0:
        base = rs
        omega1_at_zero = omegas[0]
    else:
        base = solve_radial_state_adjoint(rg, 0.0, f, g)
        omega1_at_zero = solve_modes(base, 1, 0.0, f).omega

    coercivity = min(w / k for k, w in enumerate(omegas, start=1)) if min(omegas) > 0 else None
    floor = omegas[0] - MODE_COMPARISON_FACTOR * rho * math.pi * R
    comparison = all(w >= floor - tolerance for w in omegas)

    report = StabilityReport(
        rho=rho,
        radius=R,
        modes=modes,
        Lambda=rs.Lambda,
        dphi_R=rs.dphi_R,
        source_integral=source_integral,
        c1=c1,
        sufficient_condition=sufficient,
        growth_slope=_growth_slope(omegas),
        tolerance=tolerance,
        verdict=_classify(omegas, tolerance),
        omega1_at_zero=omega1_at_zero,
        coercivity=coercivity,
        mode_comparison_holds=comparison,
        flux_bound_holds=base.flux_bound_holds,
        xi_source=xi_source,
    )
    logger.info(
        "Stability verdict",
        extra={
            "rho": rho,
            "verdict": report.verdict.value,
            "omega1": report.omega1,
            "c1": c1,
            "growth_slope": report.growth_slope,
        },
    )
    if c1 > 0 and not sufficient:
        logger.debug("Sign criterion holds while the factor-2 condition fails", extra={"c1": c1})
    return report


# ---------------------------------------------------------------------------
# Mode audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeAudit:
    """Comparison properties of ψ_k: positivity, ordering of ψ'_k(R), linear growth."""

    min_psi: float
    ordering_gap: float
    growth_gap: float

    @property
    def positive(self) -> bool:
        return self.min_psi >= -POSITIVITY_SLACK

    @property
    def ordered(self) -> bool:
        return self.ordering_gap >= -ORDERING_SLACK

    @property
    def grows_linearly(self) -> bool:
        return self.growth_gap >= -GROWTH_SLACK

    @property
    def passed(self) -> bool:
        return self.positive and self.ordered and self.grows_linearly


def mode_audit(
    rs: RadialSolution,
    rho: float,
    f: NonlinearitySpec,
    K: int = DEFAULT_MODES,
    *,
    modes: list[ModeSolution] | None = None,
) -> ModeAudit:
    """Audit ψ_k >= 0, ψ'_k(R) >= ψ'_1(R) and ψ'_k(R) >= (k/√2)·(-φ'(R))/R for k >= 2.

    Gaps are the worst-case margins; negative values are violations.
    """
    modes = modes if modes is not None else solve_spectrum(rs, K, rho, f)
    R = rs.grid.radius
    min_psi = min(float(mode.psi[1:-1].min()) for mode in modes)
    first = modes[0].dpsi_R
    ordering_gap = min(mode.dpsi_R - first for mode in modes)
    growth = [
        mode.dpsi_R - mode.k / math.sqrt(2.0) * (-rs.dphi_R) / R for mode in modes if mode.k >= 2
    ]
    audit = ModeAudit(min_psi, ordering_gap, min(growth) if growth else math.inf)
    if not audit.passed:
        logger.warning(
            "Mode audit violation",
            extra={
                "min_psi": min_psi,
                "ordering_gap": ordering_gap,
                "growth_gap": audit.growth_gap,
            },
        )
    return audit


# ---------------------------------------------------------------------------
# First-order expansion of ω_{1,ρ}
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PerturbationBundle:
    """φ₁, y₁, z₁ and w₁ = y₁ + z₁ on the unit ball, with σ = (w₁ + w₁')(1)/4."""

    grid: RadialGrid
    phi0: np.ndarray = field(repr=False)
    phi1: np.ndarray = field(repr=False)
    y1: np.ndarray = field(repr=False)
    z1: np.ndarray = field(repr=False)
    w1: np.ndarray = field(repr=False)
    flux_integral: float
    dw1_R: float
    sigma: float
    superposition_error: float

    @property
    def omega1_slope(self) -> float:
        """d ω_{1,ρ}/dρ at ρ = 0 with the πR prefactor of the assembly."""
        return 2.0 * math.pi * self.grid.radius * self.sigma


def perturbation_slope(
    f: NonlinearitySpec,
    g: SourceSpec,
    R: float = 1.0,
    n_r: int = 4096,
) -> PerturbationBundle:
    """Solve the first-order expansion problems for ω_{1,ρ} around ρ = 0.

    With I = ∫₀¹ t f(φ₀) dt:

        -(1/r)(rφ₁')'            = -f(φ₀),                 φ₁(1) = 0
        -(1/r)(ry₁')' + y₁/r²    = r·φ₀'(1)·f'(φ₀),        y₁(1) = -I
        -(1/r)(rz₁')' + z₁/r²    = r·φ₀'(1),               z₁(1) = 0
        -(1/r)(rw₁')' + w₁/r²    = -(r/2)(f'(φ₀) + 1),     w₁(1) = -I

    Raises:
        HypothesisError: Unless g ≡ 1 and R = 1.
    """
    if not g.is_identically(1.0) or R != 1.0:
        raise HypothesisError(
            "the expansion is normalized to g = 1 on the unit ball", "unit_ball", radius=R
        )
    rg = make_radial_grid(R, n_r)
    r = rg.nodes
    phi0 = solve_profile(rg, 0, 0.0, 1.0, 0.0)
    dphi0 = boundary_derivative(phi0, rg.h)
    f0 = f.evaluate(phi0, 0)
    df0 = f.evaluate(phi0, 1)
    flux = float(trapezoid(r * f0, r))

    phi1 = solve_profile(rg, 0, 0.0, -f0, 0.0)
    y1 = solve_profile(rg, 1, 0.0, r * dphi0 * df0, -flux)
    z1 = solve_profile(rg, 1, 0.0, r * dphi0, 0.0)
    w1 = solve_profile(rg, 1, 0.0, r * dphi0 * (df0 + 1.0), -flux)
    dw1 = boundary_derivative(w1, rg.h)
    sigma = (w1[-1] + dw1) / 4.0

    bundle = PerturbationBundle(
        grid=rg,
        phi0=phi0,
        phi1=phi1,
        y1=y1,
        z1=z1,
        w1=w1,
        flux_integral=flux,
        dw1_R=dw1,
        sigma=float(sigma),
        superposition_error=float(np.abs(w1 - (y1 + z1)).max()),
    )
    logger.info(
        "Perturbation slope",
        extra={"sigma": bundle.sigma, "flux_integral": flux, "omega1_slope": bundle.omega1_slope},
    )
    return bundle


# ---------------------------------------------------------------------------
# Instability demonstration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InstabilityRow:
    rho: float
    omega1: float
    ratio: float | None
    relative_error: float | None

    @property
    def marginal(self) -> bool:
        return self.rho == 0.0

    @property
    def unstable(self) -> bool:
        return self.rho > 0.0 and self.omega1 < 0.0


@dataclass(frozen=True)
class InstabilityReport:
    """ω_{1,ρ} along ρ_list; the destabilizing perturbation is V·ν = cos θ (k = 1)."""

    rows: list[InstabilityRow]
    sigma: float
    rho_threshold: float
    xi_source: XiSource
    mode: int = 1
    normal_velocity: str = "cos(theta)"

    @property
    def all_unstable(self) -> bool:
        return all(row.unstable for row in self.rows if 0.0 < row.rho <= self.rho_threshold)


def instability_demo(
    rho_list: list[float],
    *,
    f: NonlinearitySpec | None = None,
    g: SourceSpec | None = None,
    R: float = 1.0,
    n_r: int = 4096,
    xi_source: XiSource = "literal",
) -> InstabilityReport:
    """Reproduce ω_{1,ρ} < 0 for a nonnegative f with f' < -1.

    Ratios ω_{1,ρ}/(2πRρ) are compared with σ from the expansion.

    Raises:
        HypothesisError: If f is not certified on [0, 2·max φ₀).
    """
    f = f if f is not None else one_minus_two_x()
    g = g if g is not None else constant(1.0)
    rg = make_radial_grid(R, n_r)

    base = solve_radial_state_adjoint(rg, 0.0, f, g)
    u0_sup = float(base.phi.max())
    if not certify_instability_hypothesis(f, u0_sup):
        raise HypothesisError(
            "instability needs f >= 0 and f' < -1 on [0, 2·max u0)",
            "instability",
            u0_sup=u0_sup,
            kind=f.kind,
        )
    bundle = perturbation_slope(f, g, R, n_r)
    threshold = radial_rho_bar(f, R)

    rows = []
    for rho in rho_list:
        rs = base if rho == 0.0 else solve_radial_state_adjoint(rg, rho, f, g)
        omega1 = solve_modes(rs, 1, rho, f, xi_source=xi_source).omega
        if rho == 0.0:
            rows.append(InstabilityRow(rho, omega1, None, None))
            continue
        ratio = omega1 / (2.0 * math.pi * R * rho)
        error = abs(ratio - bundle.sigma) / abs(bundle.sigma)
        rows.append(InstabilityRow(rho, omega1, ratio, error))
        logger.info("Instability step", extra={"rho": rho, "omega1": omega1, "ratio": ratio})

    report = InstabilityReport(rows, bundle.sigma, threshold, xi_source)
    if not report.all_unstable:
        logger.warning(
            "omega_1 is not negative on every certified rho", extra={"rho_list": rho_list}
        )
    return report


# ---------------------------------------------------------------------------
# Elliptic-estimate orders and grid self-convergence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeReport:
    """Measured log-log orders in ρ of sup|ϕ'|, sup|ξ'_1| and sup|ζ'_1|."""

    rhos: list[float]
    adjoint_norms: list[float]
    xi_norms: list[float]
    zeta_norms: list[float]
    adjoint_slope: float
    xi_slope: float
    zeta_slope: float

    @property
    def passed(self) -> bool:
        return (
            abs(self.adjoint_slope - 1.0) <= SLOPE_TOLERANCE
            and abs(self.xi_slope - 1.0) <= SLOPE_TOLERANCE
            and abs(self.zeta_slope - 2.0) <= SLOPE_TOLERANCE
        )


def elliptic_estimate_slopes(
    rho_list: list[float],
    *,
    f: NonlinearitySpec | None = None,
    g: SourceSpec | None = None,
    R: float = 1.0,
    n_r: int = 1024,
    xi_source: XiSource = "adjoint",
) -> SlopeReport:
    """Fit the orders of the adjoint and mode-1 correction profiles in ρ.

    The default f is the truncated -e^{x²}; ζ carries f'' in its source and
    vanishes for affine nonlinearities.
    """
    if len(rho_list) < 2 or min(rho_list) <= 0:
        raise PreconditionError("need at least two positive rho values", rhos=rho_list)
    f = f if f is not None else neg_exp_square()
    g = g if g is not None else constant(1.0)
    rg = make_radial_grid(R, n_r)

    adjoint_norms, xi_norms, zeta_norms = [], [], []
    for rho in rho_list:
        rs = solve_radial_state_adjoint(rg, rho, f, g)
        mode = solve_modes(rs, 1, rho, f, xi_source=xi_source)
        adjoint_norms.append(float(np.abs(profile_derivative(rs.adjoint, rg.h)).max()))
        xi_norms.append(float(np.abs(profile_derivative(mode.xi, rg.h)).max()))
        zeta_norms.append(float(np.abs(profile_derivative(mode.zeta, rg.h)).max()))

    report = SlopeReport(
        rhos=list(rho_list),
        adjoint_norms=adjoint_norms,
        xi_norms=xi_norms,
        zeta_norms=zeta_norms,
        adjoint_slope=loglog_fit(rho_list, adjoint_norms)[0],
        xi_slope=loglog_fit(rho_list, xi_norms)[0],
        zeta_slope=loglog_fit(rho_list, zeta_norms)[0],
    )
    logger.info(
        "Elliptic-estimate slopes",
        extra={
            "adjoint_slope": report.adjoint_slope,
            "xi_slope": report.xi_slope,
            "zeta_slope": report.zeta_slope,
        },
    )
    return report


@dataclass(frozen=True)
class ConvergenceRatios:
    """Error ratios e(n)/e(2n) under grid doubling; None where the scheme is exact."""

    points: tuple[int, int, int]
    ratios: dict[str, float | None]

    @property
    def passed(self) -> bool:
        return all(
            ratio is None or abs(ratio - SECOND_ORDER_RATIO) <= RATIO_TOLERANCE * SECOND_ORDER_RATIO
            for ratio in self.ratios.values()
        )


def _ratio(coarse: float, fine: float) -> float | None:
    if fine <= EXACT_THRESHOLD and coarse <= EXACT_THRESHOLD:
        return None
    return coarse / fine if fine > 0 else math.inf


def self_convergence_ratio(
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec,
    *,
    R: float = 1.0,
    n_r: int = 128,
    k: int = 2,
    xi_source: XiSource = "adjoint",
) -> ConvergenceRatios:
    """Solve on n_r, 2n_r and 4n_r and report e(n)/e(2n) for φ, ϕ, ψ_k, ξ_k, ζ_k and ω_k.

    Profile differences are sup-norms on the coarse nodes.
    """
    sizes = (n_r, 2 * n_r, 4 * n_r)
    solutions = []
    for size in sizes:
        rs = solve_radial_state_adjoint(make_radial_grid(R, size), rho, f, g)
        solutions.append((rs, solve_modes(rs, k, rho, f, xi_source=xi_source)))

    def samples(index: int) -> dict[str, np.ndarray]:
        rs, mode = solutions[index]
        stride = 2**index
        return {
            "phi": rs.phi[::stride],
            "adjoint": rs.adjoint[::stride],
            "psi": mode.psi[::stride],
            "xi": mode.xi[::stride],
            "zeta": mode.zeta[::stride],
            "omega": np.array([mode.omega]),
        }

    levels = [samples(i) for i in range(3)]
    ratios = {}
    for name in levels[0]:
        coarse = float(np.abs(levels[0][name] - levels[1][name]).max())
        fine = float(np.abs(levels[1][name] - levels[2][name]).max())
        ratios[name] = _ratio(coarse, fine)
    logger.info(
        "Self-convergence",
        extra={"points": sizes, **{f"ratio_{name}": value for name, value in ratios.items()}},
    )
    return ConvergenceRatios(sizes, ratios)


__all__ = [
    "DEFAULT_MODES",
    "ConvergenceRatios",
    "InstabilityReport",
    "InstabilityRow",
    "ModeAudit",
    "PerturbationBundle",
    "SlopeReport",
    "StabilityReport",
    "Verdict",
    "elliptic_estimate_slopes",
    "instability_demo",
    "mode_audit",
    "perturbation_slope",
    "self_convergence_ratio",
    "stability_verdict",
]
