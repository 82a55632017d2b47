"""Five-point Dirichlet Laplacian on the interior nodes."""

from functools import lru_cache

import scipy.sparse as sp

from shapeopt.fields.grid import Grid2D


@lru_cache(maxsize=16)
def laplacian(grid: Grid2D) -> sp.csr_matrix:
    """-Δ_h as a CSR matrix of size (n-1)^2, row-major node ordering."""
    size = grid.cells_per_side - 1
    second_difference = sp.diags(
        [-1.0, 2.0, -1.0], [-1, 0, 1], shape=(size, size), format="csr"
    )
    identity = sp.identity(size, format="csr")
    operator = sp.kron(identity, second_difference) + sp.kron(second_difference, identity)
    return (operator / grid.h**2).tocsr()


__all__ = ["laplacian"]
