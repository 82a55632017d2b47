"""Euclidean projection onto the admissible densities {0 <= a <= 1, ∫a <= m}."""

import logging

import numpy as np

from shapeopt.core.errors import GridError
from shapeopt.fields.fields import DensityField
from shapeopt.fields.grid import Grid2D

logger = logging.getLogger(__name__)

BISECTION_TOLERANCE = 1e-12
BISECTION_MAX_ITERATIONS = 200


def _mass(values: np.ndarray, grid: Grid2D) -> float:
    return float(grid.h**2 * values.sum())


def projection_multiplier(a_raw: np.ndarray, m: float, grid: Grid2D) -> float:
    """Multiplier μ >= 0 of the mass constraint, found by bisection.

    The returned value is the upper end of the final bracket, so the
    projected mass never exceeds ``m``.
    """
    if m <= 0:
        raise GridError("mass bound must be positive", m=m)
    x = np.asarray(a_raw, dtype=float)
    if x.shape != grid.cell_shape:
        raise GridError("raw density does not match grid", actual=x.shape)
    if not np.all(np.isfinite(x)):
        raise GridError("raw density has non-finite values")

    if _mass(np.clip(x, 0.0, 1.0), grid) <= m:
        return 0.0

    lo, hi = 0.0, float(x.max())
    iterations = 0
    while hi - lo > BISECTION_TOLERANCE and iterations < BISECTION_MAX_ITERATIONS:
        mid = 0.5 * (lo + hi)
        if _mass(np.clip(x - mid, 0.0, 1.0), grid) > m:
            lo = mid
        else:
            hi = mid
        iterations += 1
    logger.debug("Projection multiplier", extra={"mu": hi, "iterations": iterations})
    return hi


def project_density(a_raw: np.ndarray, m: float, grid: Grid2D) -> DensityField:
    """Project raw cell values onto the admissible set: clip(a_raw - μ, 0, 1).

    Raises:
        GridError: If ``m <= 0`` or the input is not a finite cell array.
    """
    mu = projection_multiplier(a_raw, m, grid)
    values = np.clip(np.asarray(a_raw, dtype=float) - mu, 0.0, 1.0)
    return DensityField(grid, values)


__all__ = [
    "BISECTION_MAX_ITERATIONS",
    "BISECTION_TOLERANCE",
    "project_density",
    "projection_multiplier",
]
