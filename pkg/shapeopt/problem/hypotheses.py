"""Hypothesis checks (H1, H2, H4), certified ρ-thresholds and domain constants."""

from dataclasses import dataclass, field
import logging
import math
from typing import Any

import numpy as np
from scipy.sparse.linalg import eigsh
from scipy.special import jn_zeros

from shapeopt.core.errors import HypothesisError
from shapeopt.fields.grid import Grid2D
from shapeopt.fields.operators import laplacian
from shapeopt.problem.nonlinearity import NonlinearitySpec
from shapeopt.problem.source import SourceSpec

logger = logging.getLogger(__name__)

CONTRACTION_MARGIN = 0.99
DEFAULT_DELTA_FACTOR = 0.1
DEFAULT_RHO_CEILING = 1.0e3
H2_SAMPLES = 10_000


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the hypothesis checks with the thresholds they certify."""

    h1: bool
    h2: bool
    h4: bool
    n_mg: float
    delta: float
    lambda1_lb: float
    torsion_bound: float
    rho_bar: float
    rho_1: float | None
    rho_0: float
    sign: int = 1
    witnesses: dict[str, Any] = field(default_factory=dict)

    def require_below(self, rho: float, threshold: str = "rho_bar") -> None:
        """Raise unless ``0 <= rho < threshold``.

        Raises:
            HypothesisError: If ρ is negative or not below the named threshold.
        """
        bound = getattr(self, threshold)
        if bound is None:
            raise HypothesisError(f"{threshold} is not certified for this problem", threshold)
        if rho < 0 or rho >= bound:
            raise HypothesisError(
                f"rho={rho:g} is outside the certified range [0, {bound:g})",
                threshold,
                rho=rho,
                bound=bound,
            )


def lambda1_lower_bound(grid: Grid2D) -> float:
    """Exact first Dirichlet eigenvalue of the square of side 2L: 2π²/(2L)²."""
    return 2.0 * math.pi**2 / (2.0 * grid.half_width) ** 2


def discrete_lambda1(grid: Grid2D) -> float:
    """Smallest eigenvalue of the five-point Laplacian (shift-invert Lanczos)."""
    values = eigsh(laplacian(grid), k=1, sigma=0.0, which="LM", return_eigenvectors=False)
    return float(values[0])


def lambda1_disk(R: float) -> float:
    """First Dirichlet eigenvalue of the disk of radius R: j_{0,1}²/R²."""
    return float(jn_zeros(0, 1)[0] ** 2 / R**2)


def torsion_bound(area: float) -> float:
    """Talenti bound on the torsion function in two dimensions: (1/4)(|D|/π)."""
    return 0.25 * area / math.pi


def rho_bar(f: NonlinearitySpec, lambda1: float, ceiling: float = DEFAULT_RHO_CEILING) -> float:
    """Picard contraction threshold 0.99·λ₁/||f||_{W^{1,inf}}, capped when f ≡ 0."""
    if f.lip == 0.0:
        return ceiling
    return min(CONTRACTION_MARGIN * lambda1 / f.lip, ceiling)


def _sample_interval(upper: float) -> np.ndarray:
    return np.linspace(0.0, upper, H2_SAMPLES)


def check_hypotheses(
    f: NonlinearitySpec,
    g: SourceSpec,
    m: float,
    grid: Grid2D,
    *,
    delta_factor: float = DEFAULT_DELTA_FACTOR,
    rho_ceiling: float = DEFAULT_RHO_CEILING,
) -> HypothesisReport:
    """Check H1/H2/H4 on the grid and derive ρ̄, ρ₁, ρ₀ and the sup-norm bound N_mg.

    Raises:
        HypothesisError: For contradictory declarations (raised when the
            source is built) or a non-positive volume bound.
    """
    if m <= 0:
        raise HypothesisError("volume bound m must be positive", "volume", m=m)

    witnesses: dict[str, Any] = {}
    lam1 = lambda1_lower_bound(grid)
    torsion = torsion_bound(grid.area)
    samples = g.samples(grid)

    sign = g.sign
    if g.h1_bounds is None and samples.max(initial=0.0) <= 0.0 < -samples.min(initial=0.0):
        sign = -1
    signed_samples = sign * samples
    witnesses["g_min"] = float(signed_samples.min())
    witnesses["g_max"] = float(signed_samples.max())

    h1 = False
    if g.h1_bounds is not None:
        g0, g1 = g.h1_bounds
        h1 = bool(np.all(signed_samples >= g0) and np.all(signed_samples <= g1))
        if not h1:
            witnesses["h1_violation"] = "sampled source leaves the declared [g0, g1]"
        g_sup = g1
    else:
        g_sup = float(np.abs(samples).max(initial=0.0))

    bar = rho_bar(f, lam1, rho_ceiling)
    n_mg = (g_sup + bar * f.sup_f) * torsion
    delta = delta_factor * n_mg

    signed_f = float(sign)
    xs = _sample_interval(n_mg + delta)
    x_fx = signed_f * xs * f.evaluate(xs, 0)
    f0 = signed_f * float(f.evaluate(0.0, 0))
    h2 = bool(f0 <= 0.0 and np.all(np.diff(x_fx) >= -1e-14 * max(1.0, np.abs(x_fx).max())))
    if not h2:
        witnesses["h2_violation"] = "f(0) > 0" if f0 > 0 else "x f(x) decreases somewhere"

    span = max(n_mg + delta, f.window if math.isfinite(f.window) else 0.0, 1.0)
    xs4 = np.linspace(-span, span, 2 * H2_SAMPLES + 1)
    h4 = bool(
        float(f.evaluate(0.0, 0)) < 0.0 and np.all(np.diff(xs4 * f.evaluate(xs4, 0)) < 0.0)
    )

    rho_1: float | None = None
    if g.h1_bounds is not None:
        g0 = g.h1_bounds[0]
        first = f.sup_f + n_mg * f.sup_df
        candidates = [bar]
        if first > 0:
            candidates.append(CONTRACTION_MARGIN * g0 / first)
        if f.sup_df > 0:
            candidates.append(lam1 / (2.0 * f.sup_df))
        rho_1 = min(candidates)
    rho_0 = min(bar, rho_1) if rho_1 is not None else bar

    report = HypothesisReport(
        h1=h1,
        h2=h2,
        h4=h4,
        n_mg=n_mg,
        delta=delta,
        lambda1_lb=lam1,
        torsion_bound=torsion,
        rho_bar=bar,
        rho_1=rho_1,
        rho_0=rho_0,
        sign=sign,
        witnesses=witnesses,
    )
    logger.info(
        "Checked hypotheses",
        extra={
            "h1": h1,
            "h2": h2,
            "h4": h4,
            "rho_bar": bar,
            "rho_1": rho_1,
            "n_mg": n_mg,
        },
    )
    return report


def certify_instability_hypothesis(f: NonlinearitySpec, u0_sup: float) -> bool:
    """f >= 0 and f' < -1 sampled on [0, 2·||u0||_inf)."""
    xs = np.linspace(0.0, 2.0 * u0_sup, 1001, endpoint=False)
    return bool(np.all(f.evaluate(xs, 0) >= 0.0) and np.all(f.evaluate(xs, 1) < -1.0))


__all__ = [
    "CONTRACTION_MARGIN",
    "DEFAULT_DELTA_FACTOR",
    "DEFAULT_RHO_CEILING",
    "HypothesisReport",
    "certify_instability_hypothesis",
    "check_hypotheses",
    "discrete_lambda1",
    "lambda1_disk",
    "lambda1_lower_bound",
    "rho_bar",
    "torsion_bound",
]
