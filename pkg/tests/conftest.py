"""Pytest configuration and shared fixtures."""

from pathlib import Path

import numpy as np
import pytest

from shapeopt.fields import DensityField, Grid2D, disk_indicator, make_grid
from shapeopt.problem.nonlinearity import NonlinearitySpec, neg_exp_square, one_minus_two_x, zero
from shapeopt.problem.source import SourceSpec, constant, radial_gaussian, radial_linear
from shapeopt.services.radial import RadialGrid, make_radial_grid

CONFIGS_DIR = Path(__file__).parent.parent / "configs"


@pytest.fixture
def grid() -> Grid2D:
    """[-2, 2]² with 16 cells per side (h = 1/4)."""
    return make_grid(2.0, 16)


@pytest.fixture
def coarse_grid() -> Grid2D:
    return make_grid(1.0, 8)


@pytest.fixture
def disk(grid: Grid2D) -> DensityField:
    return disk_indicator(grid, 1.0)


@pytest.fixture
def random_density(grid: Grid2D) -> DensityField:
    rng = np.random.default_rng(7)
    return DensityField(grid, rng.uniform(0.1, 0.9, grid.cell_shape))


@pytest.fixture
def f_zero() -> NonlinearitySpec:
    return zero()


@pytest.fixture
def f_affine() -> NonlinearitySpec:
    """f(x) = 1 - 2x, truncated outside [-1, 1]."""
    return one_minus_two_x()


@pytest.fixture
def f_exp() -> NonlinearitySpec:
    """f(x) = -exp(x²), truncated outside [-1, 1]."""
    return neg_exp_square()


@pytest.fixture
def g_one() -> SourceSpec:
    return constant(1.0)


@pytest.fixture
def g_linear() -> SourceSpec:
    """g(r) = 2 - r."""
    return radial_linear(2.0, 1.0)


@pytest.fixture
def g_bump() -> SourceSpec:
    """Centred source valued in [1, 2], declared as H1."""
    return radial_gaussian(1.0, 2.0, 0.75, h1=(1.0, 2.0))


@pytest.fixture
def unit_ball() -> RadialGrid:
    return make_radial_grid(1.0, 512)


@pytest.fixture
def fine_ball() -> RadialGrid:
    return make_radial_grid(1.0, 4096)


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS_DIR
