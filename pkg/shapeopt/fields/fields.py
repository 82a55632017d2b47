"""Density and scalar fields on a Grid2D, quadrature and the cell/node transfer."""

from dataclasses import dataclass, field

import numpy as np

from shapeopt.core.errors import GridError
from shapeopt.fields.grid import Grid2D


def _frozen_copy(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class DensityField:
    """Cell-centered relaxed density a with 0 <= a <= 1."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.cell_shape:
            raise GridError(
                "density does not match grid",
                expected=self.grid.cell_shape,
                actual=values.shape,
            )
        if not np.all(np.isfinite(values)):
            raise GridError("density has non-finite values")
        if values.min(initial=0.0) < 0.0 or values.max(initial=0.0) > 1.0:
            raise GridError(
                "density outside [0, 1]",
                min=float(values.min()),
                max=float(values.max()),
            )
        object.__setattr__(self, "values", _frozen_copy(values))

    @property
    def mass(self) -> float:
        """Cell quadrature of a."""
        return float(self.grid.h**2 * self.values.sum())

    @classmethod
    def constant(cls, grid: Grid2D, value: float) -> "DensityField":
        return cls(grid, np.full(grid.cell_shape, float(value)))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Nodal field on the interior nodes; the boundary trace is implicitly zero."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.node_shape:
            raise GridError(
                "nodal field does not match grid",
                expected=self.grid.node_shape,
                actual=values.shape,
            )
        if not np.all(np.isfinite(values)):
            raise GridError("nodal field has non-finite values")
        object.__setattr__(self, "values", _frozen_copy(values))

    def with_boundary(self) -> np.ndarray:
        """Values on all (n+1) x (n+1) nodes, zero on the boundary."""
        return np.pad(self.values, 1)

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.values).max(initial=0.0))

    @classmethod
    def zeros(cls, grid: Grid2D) -> "ScalarField":
        return cls(grid, np.zeros(grid.node_shape))


def integrate(field_: ScalarField | DensityField, grid: Grid2D) -> float:
    """Midpoint (cells) or nodal (interior nodes) quadrature of a field over D.

    Raises:
        GridError: If the field was built on another grid.
    """
    if field_.grid != grid:
        raise GridError(
            "field dimension mismatch",
            field_n=field_.grid.cells_per_side,
            grid_n=grid.cells_per_side,
        )
    return float(grid.h**2 * np.sum(field_.values))


def cell_to_node(a: DensityField | np.ndarray, grid: Grid2D) -> np.ndarray:
    """Average cell values onto interior nodes (each node sees four cells)."""
    values = a.values if isinstance(a, DensityField) else np.asarray(a, dtype=float)
    if values.shape != grid.cell_shape:
        raise GridError("cell array does not match grid", actual=values.shape)
    return 0.25 * (values[:-1, :-1] + values[:-1, 1:] + values[1:, :-1] + values[1:, 1:])


def node_to_cell_adjoint(nodal: ScalarField | np.ndarray, grid: Grid2D) -> np.ndarray:
    """Transpose of ``cell_to_node``: spread nodal values back onto cells."""
    values = nodal.values if isinstance(nodal, ScalarField) else np.asarray(nodal, dtype=float)
    if values.shape != grid.node_shape:
        raise GridError("nodal array does not match grid", actual=values.shape)
    padded = np.pad(values, 1)
    return 0.25 * (padded[:-1, :-1] + padded[:-1, 1:] + padded[1:, :-1] + padded[1:, 1:])


def disk_indicator(grid: Grid2D, R: float) -> DensityField:
    """Indicator of the centered disk of radius R, sampled at cell centers.

    Raises:
        GridError: If the disk does not fit strictly inside the box.
    """
    if R < 0 or R >= grid.half_width:
        raise GridError("disk radius must satisfy 0 <= R < L", radius=R, half_width=grid.half_width)
    x, y = grid.cell_centers
    return DensityField(grid, (x**2 + y**2 < R**2).astype(float))


def binariness(a: DensityField) -> float:
    """∫a(1-a)/|D|; zero exactly for indicator densities."""
    grid = a.grid
    return float(grid.h**2 * np.sum(a.values * (1.0 - a.values)) / grid.area)


__all__ = [
    "DensityField",
    "ScalarField",
    "binariness",
    "cell_to_node",
    "disk_indicator",
    "integrate",
    "node_to_cell_adjoint",
]
