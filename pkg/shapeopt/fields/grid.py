"""Uniform grid on the box D = [-L, L]^2.

Densities live on the n x n cells, PDE unknowns on the (n-1) x (n-1)
interior nodes. Boundary nodes carry the homogeneous Dirichlet condition
and are never stored.
"""

from dataclasses import dataclass
from functools import cached_property
import logging
import math

import numpy as np

from shapeopt.core.errors import GridError

logger = logging.getLogger(__name__)

MIN_CELLS_PER_SIDE = 8


@dataclass(frozen=True)
class Grid2D:
    """Uniform Cartesian grid on [-L, L]^2 with n cells per side."""

    half_width: float
    cells_per_side: int

    @property
    def h(self) -> float:
        """Grid spacing 2L/n."""
        return 2.0 * self.half_width / self.cells_per_side

    @property
    def area(self) -> float:
        """|D| = (2L)^2."""
        return (2.0 * self.half_width) ** 2

    @property
    def cell_shape(self) -> tuple[int, int]:
        return (self.cells_per_side, self.cells_per_side)

    @property
    def node_shape(self) -> tuple[int, int]:
        return (self.cells_per_side - 1, self.cells_per_side - 1)

    @property
    def interior_node_count(self) -> int:
        return (self.cells_per_side - 1) ** 2

    @cached_property
    def node_coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates (x, y) of interior nodes, ``indexing="ij"``."""
        ticks = -self.half_width + self.h * np.arange(1, self.cells_per_side)
        return np.meshgrid(ticks, ticks, indexing="ij")

    @cached_property
    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates (x, y) of cell centers, ``indexing="ij"``."""
        ticks = -self.half_width + self.h * (np.arange(self.cells_per_side) + 0.5)
        return np.meshgrid(ticks, ticks, indexing="ij")

    def node_index(self, i: int, j: int) -> int:
        """Flat row-major index of interior node (i, j), 1 <= i, j <= n-1."""
        n = self.cells_per_side
        if not (1 <= i <= n - 1 and 1 <= j <= n - 1):
            raise GridError(f"node ({i}, {j}) is not an interior node", i=i, j=j)
        return (i - 1) * (n - 1) + (j - 1)

    def cell_index(self, i: int, j: int) -> int:
        """Flat row-major index of cell (i, j), 0 <= i, j <= n-1."""
        n = self.cells_per_side
        if not (0 <= i < n and 0 <= j < n):
            raise GridError(f"cell ({i}, {j}) is outside the grid", i=i, j=j)
        return i * n + j


def make_grid(L: float, n: int) -> Grid2D:
    """Build the grid on [-L, L]^2 with ``n`` cells per side.

    Raises:
        GridError: If ``n < 8`` ("grid too coarse") or ``L`` is not positive.
    """
    if not math.isfinite(L) or L <= 0:
        raise GridError("half width must be positive", half_width=L)
    if int(n) != n or n < MIN_CELLS_PER_SIDE:
        raise GridError(
            f"grid too coarse: need at least {MIN_CELLS_PER_SIDE} cells per side",
            cells_per_side=n,
        )
    grid = Grid2D(half_width=float(L), cells_per_side=int(n))
    logger.debug(
        "Built grid", extra={"half_width": grid.half_width, "n": grid.cells_per_side, "h": grid.h}
    )
    return grid


__all__ = ["MIN_CELLS_PER_SIDE", "Grid2D", "make_grid"]
