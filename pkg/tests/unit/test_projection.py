"""Tests for the projection onto admissible densities."""

import numpy as np
import pytest
from scipy.optimize import minimize

from shapeopt.core.errors import GridError
from shapeopt.fields import Grid2D, make_grid, project_density, projection_multiplier


class TestProjectDensity:
    """Tests for project_density."""

    def test_feasible_input_is_only_clipped(self, grid: Grid2D) -> None:
        """When the clipped mass is within m the multiplier is zero."""
        raw = np.full(grid.cell_shape, 1.3)
        raw[:8] = -0.2

        projected = project_density(raw, grid.area, grid)

        assert projection_multiplier(raw, grid.area, grid) == 0.0
        np.testing.assert_array_equal(projected.values, np.clip(raw, 0.0, 1.0))

    def test_mass_constraint_saturates_from_below(self, grid: Grid2D) -> None:
        """Projected mass is at most m and within the bisection tolerance of it."""
        rng = np.random.default_rng(3)
        raw = rng.uniform(-0.5, 1.5, grid.cell_shape)
        m = 0.2 * grid.area

        projected = project_density(raw, m, grid)

        assert projected.mass <= m
        assert projected.mass == pytest.approx(m, abs=1e-9)
        assert projected.values.min() >= 0.0
        assert projected.values.max() <= 1.0

    def test_idempotent(self, grid: Grid2D) -> None:
        """Projecting twice changes nothing."""
        rng = np.random.default_rng(4)
        m = 0.3 * grid.area
        once = project_density(rng.uniform(-1.0, 2.0, grid.cell_shape), m, grid)
        twice = project_density(once.values, m, grid)

        np.testing.assert_array_equal(once.values, twice.values)

    def test_non_expansive(self, grid: Grid2D) -> None:
        """||P(x) - P(y)|| <= ||x - y|| on random pairs with random mass bounds."""
        rng = np.random.default_rng(8)

        for _ in range(50):
            x = rng.uniform(-1.0, 2.0, grid.cell_shape)
            y = x + rng.normal(scale=rng.uniform(0.01, 1.0), size=grid.cell_shape)
            m = rng.uniform(0.05, 1.0) * grid.area

            px = project_density(x, m, grid).values
            py = project_density(y, m, grid).values

            gap = np.linalg.norm(px - py)
            assert gap <= np.linalg.norm(x - y) + 1e-9

    def test_invalid_mass_bound(self, grid: Grid2D) -> None:
        """m must be positive."""
        with pytest.raises(GridError):
            project_density(np.zeros(grid.cell_shape), 0.0, grid)

    def test_non_finite_input(self, grid: Grid2D) -> None:
        """NaN in the raw density is rejected."""
        raw = np.zeros(grid.cell_shape)
        raw[2, 2] = np.nan
        with pytest.raises(GridError):
            project_density(raw, 1.0, grid)

    def test_matches_quadratic_program(self) -> None:
        """Agrees with a generic QP solver on an 8 x 8 grid."""
        grid = make_grid(1.0, 8)
        rng = np.random.default_rng(11)
        raw = rng.uniform(-0.5, 1.5, grid.cell_shape).ravel()
        h2 = grid.h**2
        m = 0.4 * grid.area

        result = minimize(
            lambda a: 0.5 * float(np.sum((a - raw) ** 2)),
            np.clip(raw, 0.0, 1.0) * 0.3,
            jac=lambda a: a - raw,
            bounds=[(0.0, 1.0)] * raw.size,
            constraints=[
                {
                    "type": "ineq",
                    "fun": lambda a: m - h2 * a.sum(),
                    "jac": lambda a: -h2 * np.ones_like(a),
                }
            ],
            method="SLSQP",
            options={"ftol": 1e-14, "maxiter": 500},
        )
        projected = project_density(raw.reshape(grid.cell_shape), m, grid)

        assert result.success
        np.testing.assert_allclose(projected.values.ravel(), result.x, atol=1e-6)
