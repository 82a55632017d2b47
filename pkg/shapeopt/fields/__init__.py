"""Discrete geometry of the box, fields, quadrature and admissible-set projection."""

from shapeopt.fields.fields import (
    DensityField,
    ScalarField,
    binariness,
    cell_to_node,
    disk_indicator,
    integrate,
    node_to_cell_adjoint,
)
from shapeopt.fields.grid import Grid2D, make_grid
from shapeopt.fields.operators import laplacian
from shapeopt.fields.projection import project_density, projection_multiplier

__all__ = [
    "DensityField",
    "Grid2D",
    "ScalarField",
    "binariness",
    "cell_to_node",
    "disk_indicator",
    "integrate",
    "laplacian",
    "make_grid",
    "node_to_cell_adjoint",
    "project_density",
    "projection_multiplier",
]
