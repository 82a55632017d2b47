"""Acceptance suite: closed-form anchors and property checks runnable at desk scale."""

from collections.abc import Callable, Iterable
from dataclasses import dataclass
import logging
import math
import time

import numpy as np

from shapeopt.core.errors import PreconditionError
from shapeopt.fields.fields import DensityField, disk_indicator
from shapeopt.fields.grid import make_grid
from shapeopt.problem.hypotheses import check_hypotheses
from shapeopt.problem.nonlinearity import neg_exp_square, one_minus_two_x, zero
from shapeopt.problem.source import constant, radial_gaussian, radial_linear
from shapeopt.services.objective import gradient_check
from shapeopt.services.probes import (
    m_continuation_probe,
    monotonicity_probe,
    rho_scaling_probe,
    topological_sign_field,
)
from shapeopt.services.radial import make_radial_grid, solve_radial_state_adjoint
from shapeopt.services.stability import (
    Verdict,
    elliptic_estimate_slopes,
    instability_demo,
    perturbation_slope,
    stability_verdict,
)

logger = logging.getLogger(__name__)

SIGMA_EXACT = -7.0 / 32.0
BALL_ENERGY = -math.pi / 16.0


@dataclass(frozen=True)
class AcceptanceResult:
    name: str
    passed: bool
    measured: str
    expected: str
    seconds: float = 0.0


Check = Callable[[int | None], tuple[bool, str, str]]


def _radial_state(workers: int | None) -> tuple[bool, str, str]:  # noqa: ARG001
    rs = solve_radial_state_adjoint(make_radial_grid(1.0, 4096), 0.0, zero(), constant(1.0))
    r = rs.grid.nodes
    error = float(np.abs(rs.phi - (1.0 - r**2) / 4.0).max())
    flux = -rs.dphi_R
    passed = error <= 1e-6 and abs(flux - 0.5) <= 1e-5
    return passed, f"max_err={error:.2e} -phi'(1)={flux:.8f}", "max_err<=1e-6, -phi'(1)=0.5±1e-5"


def _spectrum_closed_form(workers: int | None) -> tuple[bool, str, str]:
    f, g = zero(), constant(1.0)
    rs = solve_radial_state_adjoint(make_radial_grid(1.0, 4096), 0.0, f, g)
    report = stability_verdict(rs, 0.0, f, g, 20, workers=workers)
    omegas = report.spectrum
    worst = max(
        abs(w - math.pi * (k - 1) / 4.0) / (math.pi * (k - 1) / 4.0)
        for k, w in enumerate(omegas, start=1)
        if k >= 2
    )
    passed = worst <= 1e-3 and abs(omegas[0]) <= 1e-6 * math.pi
    return passed, f"omega1={omegas[0]:.2e} rel_err={worst:.2e}", "omega_k=pi(k-1)/4 (1e-3)"


def _stable_example(workers: int | None) -> tuple[bool, str, str]:
    f, g = zero(), radial_linear(2.0, 1.0)
    rs = solve_radial_state_adjoint(make_radial_grid(1.0, 4096), 0.0, f, g)
    report = stability_verdict(rs, 0.0, f, g, 20, workers=workers)
    passed = (
        abs(report.omega1 - 2.0 * math.pi / 9.0) <= 1e-3
        and report.verdict is Verdict.STABLE
        and abs(report.c1 - 1.0 / 3.0) <= 1e-4
    )
    measured = f"omega1={report.omega1:.6f} c1={report.c1:.6f} verdict={report.verdict.value}"
    return passed, measured, "omega1=2pi/9±1e-3, c1=1/3±1e-4, stable"


def _instability(workers: int | None) -> tuple[bool, str, str]:  # noqa: ARG001
    f, g = one_minus_two_x(), constant(1.0)
    bundle = perturbation_slope(f, g, 1.0, 4096)
    report = instability_demo([1e-2, 1e-3], f=f, g=g)
    coarse, fine = report.rows
    passed = (
        abs(bundle.sigma - SIGMA_EXACT) <= 1e-4
        and report.all_unstable
        and coarse.relative_error is not None
        and coarse.relative_error <= 0.10
        and fine.relative_error is not None
        and fine.relative_error <= 0.03
    )
    measured = f"sigma={bundle.sigma:.6f} ratios={coarse.ratio:.5f},{fine.ratio:.5f}"
    return passed, measured, "sigma=-7/32±1e-4, ratio within 10%/3%"


def _gradient(workers: int | None) -> tuple[bool, str, str]:  # noqa: ARG001
    grid = make_grid(2.0, 64)
    rng = np.random.default_rng(0)
    a = DensityField(grid, rng.uniform(0.05, 0.95, grid.cell_shape))
    g = radial_gaussian(1.0, 2.0, 0.75, h1=(1.0, 2.0))
    report = gradient_check(grid, a, 100.0, 0.05, one_minus_two_x(), g, 20, seed=0)
    return (
        report.max_relative_error <= 1e-4,
        f"max_rel_err={report.max_relative_error:.2e}",
        "max_rel_err<=1e-4",
    )


def _monotonicity(workers: int | None) -> tuple[bool, str, str]:
    grid = make_grid(2.0, 32)
    f = one_minus_two_x()
    g = radial_gaussian(1.0, 2.0, 0.75, h1=(1.0, 2.0))
    m = 0.3 * grid.area
    hypotheses = check_hypotheses(f, g, m, grid)
    if hypotheses.rho_1 is None:
        return False, "rho_1 not certified", "H1 certified"
    rho = 0.5 * hypotheses.rho_1
    report = monotonicity_probe(
        grid, rho, f, g, m, 1e3, 50, seed=0, report=hypotheses, workers=workers
    )
    return report.violations == 0, f"violations={report.violations}", "violations=0"


def _rho_scaling(workers: int | None) -> tuple[bool, str, str]:  # noqa: ARG001
    grid = make_grid(2.0, 64)
    report = rho_scaling_probe(
        grid,
        disk_indicator(grid, 1.0),
        1e3,
        [1e-3, 3e-3, 1e-2, 3e-2, 1e-1],
        one_minus_two_x(),
        constant(1.0),
    )
    passed = abs(report.slope - 1.0) <= 0.1 and report.r_squared >= 0.99
    return passed, f"slope={report.slope:.4f} R2={report.r_squared:.5f}", "slope=1±0.1, R2>=0.99"


def _m_continuation(workers: int | None) -> tuple[bool, str, str]:  # noqa: ARG001
    grid = make_grid(2.0, 256)
    report = m_continuation_probe(grid, 0.0, zero(), constant(1.0), [1e2, 1e3, 1e4, 1e5])
    gap = abs(report.final_value - BALL_ENERGY)
    passed = report.cauchy_decreasing and report.exterior_decreasing and gap <= 3e-2
    measured = (
        f"final={report.final_value:.5f} gap={gap:.2e} "
        f"cauchy={report.cauchy_decreasing} exterior={report.exterior_decreasing}"
    )
    return passed, measured, "Cauchy, exterior decreasing, |J-(-pi/16)|<=3e-2"


def _elliptic_slopes(workers: int | None) -> tuple[bool, str, str]:  # noqa: ARG001
    report = elliptic_estimate_slopes([1e-3, 3e-3, 1e-2, 3e-2, 1e-1])
    measured = (
        f"slopes={report.adjoint_slope:.3f},{report.xi_slope:.3f},{report.zeta_slope:.3f}"
    )
    return report.passed, measured, "slopes 1,1,2 (±0.15)"


def _topological(workers: int | None) -> tuple[bool, str, str]:  # noqa: ARG001
    grid = make_grid(2.0, 64)
    report = topological_sign_field(grid, 0.1, neg_exp_square())
    passed = report.negative_fraction >= 0.99 and report.hole_delta < 0.0
    measured = f"negative={report.negative_fraction:.4f} hole_delta={report.hole_delta:.3e}"
    return passed, measured, "negative>=0.99, hole_delta<0"


def _mode_growth(workers: int | None) -> tuple[bool, str, str]:
    f, g = zero(), constant(1.0)
    rs = solve_radial_state_adjoint(make_radial_grid(1.0, 4096), 0.0, f, g)
    slope = stability_verdict(rs, 0.0, f, g, 20, workers=workers).growth_slope
    passed = abs(slope - math.pi / 4.0) <= 0.02 * math.pi / 4.0
    return passed, f"slope={slope:.6f}", "slope=pi/4±2%"


CHECKS: dict[str, Check] = {
    "radial_state": _radial_state,
    "spectrum_closed_form": _spectrum_closed_form,
    "stable_example": _stable_example,
    "instability": _instability,
    "gradient": _gradient,
    "monotonicity": _monotonicity,
    "rho_scaling": _rho_scaling,
    "m_continuation": _m_continuation,
    "elliptic_slopes": _elliptic_slopes,
    "topological_sign": _topological,
    "mode_growth": _mode_growth,
}


def run_acceptance(
    subset: Iterable[str] | None = None, *, workers: int | None = None
) -> list[AcceptanceResult]:
    """Run the named checks (all by default) in registry order.

    Raises:
        PreconditionError: If a requested check does not exist.
    """
    names = list(CHECKS) if subset is None else list(subset)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise PreconditionError(
            f"unknown acceptance checks: {', '.join(unknown)}", known=list(CHECKS)
        )

    results = []
    for name in names:
        started = time.perf_counter()
        passed, measured, expected = CHECKS[name](workers)
        elapsed = time.perf_counter() - started
        results.append(AcceptanceResult(name, passed, measured, expected, elapsed))
        log = logger.info if passed else logger.warning
        log(
            "Acceptance check finished",
            extra={"check": name, "passed": passed, "measured": measured, "seconds": elapsed},
        )
    return results


__all__ = ["CHECKS", "AcceptanceResult", "run_acceptance"]
