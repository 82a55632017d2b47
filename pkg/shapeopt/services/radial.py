"""Radial reduction on the ball B(0, R): state, adjoint and Fourier-mode profiles.

Every profile solves a two-point problem

    -(1/r)(r y')' + (k²/r² + q(r)) y = S(r)   on (0, R),   y(R) = b,

discretized by the conservative three-point scheme on r_i = i·R/n_r and
solved as a banded system. For k = 0 the axis row uses the symmetric
limit -(1/r)(r y')' -> -2y''(0); for k >= 1 the profile vanishes at r = 0.
Boundary derivatives use the second-order one-sided stencil.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
import logging
import math
from typing import Literal

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import LinAlgError, solve_banded

from shapeopt.core.errors import (
    ConvergenceError,
    HypothesisError,
    PreconditionError,
    SolverBreakdownError,
)
from shapeopt.problem.hypotheses import lambda1_disk, rho_bar
from shapeopt.problem.nonlinearity import NonlinearitySpec
from shapeopt.problem.source import SourceSpec

logger = logging.getLogger(__name__)

MIN_RADIAL_POINTS = 64
RADIAL_PICARD_TOLERANCE = 1e-12
RADIAL_PICARD_MAX_ITERATIONS = 500

XiSource = Literal["adjoint", "literal"]


@dataclass(frozen=True)
class RadialGrid:
    """Nodes r_i = i·R/n_r, i = 0..n_r."""

    radius: float
    points: int

    @property
    def h(self) -> float:
        return self.radius / self.points

    @cached_property
    def nodes(self) -> np.ndarray:
        r = self.h * np.arange(self.points + 1)
        r[-1] = self.radius
        r.setflags(write=False)
        return r


def make_radial_grid(R: float, n_r: int) -> RadialGrid:
    """Build the radial grid.

    Raises:
        PreconditionError: If ``n_r < 64`` or ``R`` is not positive.
    """
    if not math.isfinite(R) or R <= 0:
        raise PreconditionError("radius must be positive", radius=R)
    if int(n_r) != n_r or n_r < MIN_RADIAL_POINTS:
        raise PreconditionError(
            f"radial grid needs at least {MIN_RADIAL_POINTS} intervals", points=n_r
        )
    return RadialGrid(float(R), int(n_r))


def boundary_derivative(y: np.ndarray, h: float) -> float:
    """y'(R) by the one-sided stencil (3y_n - 4y_{n-1} + y_{n-2})/(2h)."""
    return float((3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * h))


def profile_derivative(y: np.ndarray, h: float) -> np.ndarray:
    """Second-order derivative of a profile on the whole grid."""
    return np.gradient(y, h, edge_order=2)


def solve_profile(
    rg: RadialGrid,
    k: int,
    potential: np.ndarray | float,
    source: np.ndarray | float,
    boundary_value: float,
) -> np.ndarray:
    """Solve -(1/r)(r y')' + (k²/r² + q) y = S with y(R) = b; returns y on all nodes.

    Raises:
        SolverBreakdownError: If the banded system is singular.
    """
    n, h = rg.points, rg.h
    r = rg.nodes
    q = np.broadcast_to(np.asarray(potential, dtype=float), r.shape)
    s = np.broadcast_to(np.asarray(source, dtype=float), r.shape)

    start = 0 if k == 0 else 1
    idx = np.arange(start, n)
    ri = r[idx]
    r_minus = ri - 0.5 * h
    r_plus = ri + 0.5 * h

    with np.errstate(divide="ignore", invalid="ignore"):
        lower = -r_minus / (ri * h**2)
        upper = -r_plus / (ri * h**2)
        diag = (r_minus + r_plus) / (ri * h**2) + q[idx] + k**2 / ri**2
    rhs = s[idx].copy()

    if k == 0:
        diag[0] = 4.0 / h**2 + q[0]
        upper[0] = -4.0 / h**2
        lower[0] = 0.0
    rhs[-1] -= upper[-1] * boundary_value

    banded = np.zeros((3, idx.size))
    banded[0, 1:] = upper[:-1]
    banded[1] = diag
    banded[2, :-1] = lower[1:]
    try:
        interior = solve_banded((1, 1), banded, rhs)
    except (LinAlgError, ValueError) as e:
        raise SolverBreakdownError("tridiagonal breakdown", k=k, points=n) from e
    if not np.all(np.isfinite(interior)):
        raise SolverBreakdownError("tridiagonal solve produced non-finite values", k=k)

    y = np.zeros(n + 1)
    y[start:n] = interior
    y[n] = boundary_value
    return y


def radial_integral(rg: RadialGrid, values: np.ndarray) -> float:
    """∫_{B(0,R)} of a radial function: 2π ∫ r·values dr."""
    return float(2.0 * math.pi * trapezoid(rg.nodes * values, rg.nodes))


def radial_rho_bar(f: NonlinearitySpec, R: float) -> float:
    """Contraction threshold on the ball: 0.99·j₀₁²/R² / ||f||_{W^{1,inf}}."""
    return rho_bar(f, lambda1_disk(R))


@dataclass(frozen=True, eq=False)
class RadialSolution:
    """State φ_ρ, adjoint ϕ_ρ, their boundary data and Λ_ρ."""

    grid: RadialGrid
    rho: float
    phi: np.ndarray = field(repr=False)
    adjoint: np.ndarray = field(repr=False)
    dphi_R: float
    dadjoint_R: float
    d2phi_R: float
    Lambda: float
    g_R: float
    energy: float
    picard_iterations: int
    f: NonlinearitySpec = field(repr=False)
    g: SourceSpec = field(repr=False)

    @property
    def flux_bound_holds(self) -> bool:
        """-φ'(R) >= (R/2)·g(R)."""
        return -self.dphi_R >= 0.5 * self.grid.radius * self.g_R - 1e-12

    @property
    def is_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.phi) <= 1e-12))


def solve_radial_state_adjoint(
    rg: RadialGrid,
    rho: float,
    f: NonlinearitySpec,
    g: SourceSpec,
    *,
    tolerance: float = RADIAL_PICARD_TOLERANCE,
    max_iterations: int = RADIAL_PICARD_MAX_ITERATIONS,
) -> RadialSolution:
    """Solve -(1/r)(rφ')' + ρ f(φ) = g and -(1/r)(rϕ')' + ρ f'(φ) ϕ = -ρ f(φ).

    Raises:
        HypothesisError: If ρ is not below the ball's contraction threshold.
        ConvergenceError: If Picard hits its cap.
    """
    bar = radial_rho_bar(f, rg.radius)
    if rho < 0 or rho >= bar:
        raise HypothesisError(
            f"rho={rho:g} must lie in [0, rho_bar={bar:g}) on the ball",
            "rho_bar",
            rho=rho,
            rho_bar=bar,
        )
    r = rg.nodes
    g_r = g.at_radius(r)

    if rho == 0.0 or f.is_zero:
        phi = solve_profile(rg, 0, 0.0, g_r, 0.0)
        iterations = 1
    else:
        phi = np.zeros_like(r)
        for iterations in range(1, max_iterations + 1):  # noqa: B007
            new = solve_profile(rg, 0, 0.0, g_r - rho * f.evaluate(phi, 0), 0.0)
            increment = float(np.abs(new - phi).max())
            phi = new
            if increment <= tolerance:
                break
        else:
            raise ConvergenceError(
                "radial Picard iteration hit its cap",
                solver="radial_picard",
                iterations=max_iterations,
                residual=increment,
            )

    if rho == 0.0 or f.is_zero:
        adjoint = np.zeros_like(r)
    else:
        adjoint = solve_profile(rg, 0, rho * f.evaluate(phi, 1), -rho * f.evaluate(phi, 0), 0.0)

    h, R = rg.h, rg.radius
    dphi = boundary_derivative(phi, h)
    dadj = boundary_derivative(adjoint, h)
    g_R = float(g.at_radius(R))
    d2phi = rho * float(f.evaluate(0.0, 0)) - g_R - dphi / R
    lam = dadj * dphi - 0.5 * dphi**2
    energy = -0.5 * radial_integral(rg, g_r * phi) - 0.5 * rho * radial_integral(
        rg, phi * f.evaluate(phi, 0)
    )

    solution = RadialSolution(
        grid=rg,
        rho=rho,
        phi=phi,
        adjoint=adjoint,
        dphi_R=dphi,
        dadjoint_R=dadj,
        d2phi_R=d2phi,
        Lambda=lam,
        g_R=g_R,
        energy=energy,
        picard_iterations=iterations,
        f=f,
        g=g,
    )
    logger.debug(
        "Radial state solved",
        extra={"rho": rho, "dphi_R": dphi, "Lambda": lam, "iterations": iterations},
    )
    return solution


@dataclass(frozen=True, eq=False)
class ModeSolution:
    """Profiles ψ_k, ξ_k, ζ_k, their derivatives at R and ω_{k,ρ}."""

    k: int
    psi: np.ndarray = field(repr=False)
    xi: np.ndarray = field(repr=False)
    zeta: np.ndarray = field(repr=False)
    dpsi_R: float
    dxi_R: float
    dzeta_R: float
    omega: float


def assemble_omega(rs: RadialSolution, dpsi: float, dxi: float, dzeta: float) -> float:
    """ω_{k,ρ} from boundary derivatives; all quantities evaluated at r = R."""
    R = rs.grid.radius
    dphi, dadj, d2phi = rs.dphi_R, rs.dadjoint_R, rs.d2phi_R
    bracket = (
        -2.0 * dpsi * dadj
        - dphi * dzeta
        - d2phi * dadj
        - dxi * dphi
        - rs.Lambda / R
        + dphi**2 / (2.0 * R)
        + rs.g_R * dphi
        - dphi * dpsi
    )
    return math.pi * R * bracket


def solve_modes(
    rs: RadialSolution,
    k: int,
    rho: float,
    f: NonlinearitySpec,
    *,
    xi_source: XiSource = "adjoint",
) -> ModeSolution:
    """Solve the three mode problems for index k and assemble ω_{k,ρ}.

    ψ_k:  -(1/r)(rψ')' + (k²/r² + ρf'(φ))ψ = 0,             ψ(R) = -φ'(R)
    ξ_k:  -(1/r)(rξ')' + (k²/r² + ρf'(φ))ξ = -ρ f'(φ) ψ_k  (adjoint) or -ρψ_k (literal)
    ζ_k:  -(1/r)(rζ')' + (k²/r² + ρf'(φ))ζ = -ρ ψ_k ϕ f''(φ)

    Raises:
        PreconditionError: If k < 1, ρ differs from the state's, or the ξ variant is unknown.
    """
    if k < 1:
        raise PreconditionError("mode index must be >= 1", k=k)
    if rho != rs.rho:
        raise PreconditionError("mode solve needs the state at the same rho", rho=rho, state=rs.rho)
    if xi_source not in ("adjoint", "literal"):
        raise PreconditionError(f"unknown xi source '{xi_source}'")

    rg = rs.grid
    potential = rho * f.evaluate(rs.phi, 1)
    psi = solve_profile(rg, k, potential, 0.0, -rs.dphi_R)

    if rho == 0.0:
        xi = np.zeros_like(psi)
        zeta = np.zeros_like(psi)
    else:
        xi_rhs = -rho * psi if xi_source == "literal" else -rho * f.evaluate(rs.phi, 1) * psi
        xi = solve_profile(rg, k, potential, xi_rhs, 0.0)
        zeta_rhs = -rho * psi * rs.adjoint * f.evaluate(rs.phi, 2)
        zeta = solve_profile(rg, k, potential, zeta_rhs, 0.0)

    h = rg.h
    dpsi = boundary_derivative(psi, h)
    dxi = boundary_derivative(xi, h)
    dzeta = boundary_derivative(zeta, h)
    return ModeSolution(
        k=k,
        psi=psi,
        xi=xi,
        zeta=zeta,
        dpsi_R=dpsi,
        dxi_R=dxi,
        dzeta_R=dzeta,
        omega=assemble_omega(rs, dpsi, dxi, dzeta),
    )


def solve_spectrum(
    rs: RadialSolution,
    K: int,
    rho: float,
    f: NonlinearitySpec,
    *,
    xi_source: XiSource = "adjoint",
    workers: int | None = None,
) -> list[ModeSolution]:
    """Modes k = 1..K; with ``workers`` > 1 they fan out over a thread pool."""
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(
                pool.map(lambda k: solve_modes(rs, k, rho, f, xi_source=xi_source), range(1, K + 1))
            )
    return [solve_modes(rs, k, rho, f, xi_source=xi_source) for k in range(1, K + 1)]


__all__ = [
    "MIN_RADIAL_POINTS",
    "ModeSolution",
    "RadialGrid",
    "RadialSolution",
    "XiSource",
    "assemble_omega",
    "boundary_derivative",
    "make_radial_grid",
    "profile_derivative",
    "radial_integral",
    "radial_rho_bar",
    "solve_modes",
    "solve_profile",
    "solve_radial_state_adjoint",
    "solve_spectrum",
]
