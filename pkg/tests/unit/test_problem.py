"""Tests for the nonlinearity library, sources and hypothesis checks."""

import math

import numpy as np
import pytest

from shapeopt.core.errors import ConfigError, HypothesisError
from shapeopt.fields import Grid2D, make_grid
from shapeopt.problem import (
    NonlinearitySpec,
    SourceSpec,
    build_nonlinearity,
    build_source,
    certify_instability_hypothesis,
    check_hypotheses,
    discrete_lambda1,
    lambda1_disk,
    lambda1_lower_bound,
    nl_eval,
    rho_bar,
    torsion_bound,
)
from shapeopt.problem.nonlinearity import affine, tabulated
from shapeopt.problem.source import constant, radial_gaussian, radial_linear, tabulated_radial

# ---------------------------------------------------------------------------
# Nonlinearity library
# ---------------------------------------------------------------------------


class TestNonlinearity:
    """Tests for NonlinearitySpec evaluation and bounds."""

    def test_affine_values_and_derivatives(self, f_affine: NonlinearitySpec) -> None:
        """1 - 2x with f' = -2 and f'' = 0 inside the window."""
        assert nl_eval(f_affine, 0.25) == pytest.approx(0.5)
        assert nl_eval(f_affine, 0.25, 1) == pytest.approx(-2.0)
        assert nl_eval(f_affine, 0.25, 2) == 0.0

    def test_truncation_outside_window(self, f_affine: NonlinearitySpec) -> None:
        """f is frozen and its derivatives vanish outside [-X, X]."""
        assert nl_eval(f_affine, 5.0) == pytest.approx(nl_eval(f_affine, 1.0))
        assert nl_eval(f_affine, 5.0, 1) == 0.0

    def test_sup_norms(self, f_affine: NonlinearitySpec, f_exp: NonlinearitySpec) -> None:
        """Bounds are taken over the window."""
        assert f_affine.sup_f == pytest.approx(3.0)
        assert f_affine.sup_df == pytest.approx(2.0)
        assert f_affine.lip == pytest.approx(3.0)
        assert f_exp.sup_f == pytest.approx(math.e)
        assert f_exp.sup_df == pytest.approx(2.0 * math.e)

    def test_zero_nonlinearity(self, f_zero: NonlinearitySpec) -> None:
        """f ≡ 0 has zero bounds and is flagged."""
        assert f_zero.is_zero
        assert f_zero.lip == 0.0
        np.testing.assert_array_equal(f_zero.evaluate(np.linspace(-3, 3, 7), 2), 0.0)

    def test_second_derivative_of_exponential(self, f_exp: NonlinearitySpec) -> None:
        """f''(x) = -(2 + 4x²)e^{x²}."""
        assert nl_eval(f_exp, 0.5, 2) == pytest.approx(-3.0 * math.exp(0.25))

    def test_tabulated_includes_interpolant_slopes(self) -> None:
        """The Lipschitz bound of a table covers the piecewise-linear interpolant."""
        spec = tabulated([0.0, 1.0, 2.0], [0.0, 3.0, 3.0], [0.0, 0.0, 0.0])

        assert spec.sup_df == pytest.approx(3.0)
        assert nl_eval(spec, 0.5) == pytest.approx(1.5)

    def test_tabulated_rejects_unsorted_abscissae(self) -> None:
        with pytest.raises(ConfigError):
            tabulated([0.0, 2.0, 1.0], [0.0, 1.0, 2.0], [1.0, 1.0, 1.0])

    def test_build_by_name(self) -> None:
        """Library lookup by kind, with parameter errors reported as ConfigError."""
        spec = build_nonlinearity("affine", {"a": -1.0, "b": -1.0, "window": 2.0})

        assert nl_eval(spec, 1.0) == pytest.approx(-2.0)
        with pytest.raises(ConfigError, match="missing parameter"):
            build_nonlinearity("affine", {"a": 1.0})
        with pytest.raises(ConfigError, match="unknown nonlinearity"):
            build_nonlinearity("cubic")

    def test_infinite_window_rejected(self) -> None:
        with pytest.raises(ConfigError):
            affine(1.0, 1.0, window=math.inf)


# ---------------------------------------------------------------------------
# Sources
# ---------------------------------------------------------------------------


class TestSource:
    """Tests for SourceSpec construction and sampling."""

    def test_radial_linear_profile(self, g_linear: SourceSpec) -> None:
        """g(r) = 2 - r."""
        np.testing.assert_allclose(g_linear.at_radius(np.array([0.0, 0.5, 1.0])), [2.0, 1.5, 1.0])

    def test_radial_linear_must_not_increase(self) -> None:
        with pytest.raises(ConfigError):
            radial_linear(1.0, -1.0)

    def test_contradictory_h1_declaration(self) -> None:
        """g0 > g1 or g0 <= 0 contradicts H1."""
        with pytest.raises(HypothesisError):
            constant(1.0, h1=(2.0, 1.0))
        with pytest.raises(HypothesisError):
            constant(1.0, h1=(0.0, 1.0))

    def test_constant_source_may_declare_equal_bounds(self) -> None:
        """g0 = g1 is allowed for constant sources."""
        assert constant(1.0, h1=(1.0, 1.0)).h1_bounds == (1.0, 1.0)

    def test_gaussian_stays_within_bounds(self, g_bump: SourceSpec, grid: Grid2D) -> None:
        samples = g_bump.samples(grid)

        assert samples.min() >= 1.0
        assert samples.max() <= 2.0

    def test_tabulated_radial_must_not_increase(self) -> None:
        with pytest.raises(ConfigError):
            tabulated_radial([0.0, 1.0], [1.0, 2.0])

    def test_identically(self, g_one: SourceSpec, g_linear: SourceSpec) -> None:
        assert g_one.is_identically(1.0)
        assert not g_one.is_identically(2.0)
        assert not g_linear.is_identically(1.0)

    def test_build_by_name(self) -> None:
        source = build_source("radial_gaussian", {"g0": 1.0, "g1": 3.0, "width": 0.5})

        assert float(source.at_radius(0.0)) == pytest.approx(3.0)
        with pytest.raises(ConfigError):
            build_source("ring", {})


# ---------------------------------------------------------------------------
# Domain constants and hypotheses
# ---------------------------------------------------------------------------


class TestDomainConstants:
    """Tests for λ₁ and torsion bounds."""

    def test_lambda1_of_square(self, grid: Grid2D) -> None:
        """2π²/(2L)² on [-2, 2]²."""
        assert lambda1_lower_bound(grid) == pytest.approx(2.0 * math.pi**2 / 16.0)

    def test_discrete_lambda1_close_to_continuous(self) -> None:
        """The five-point eigenvalue approaches λ₁ from below."""
        grid = make_grid(2.0, 64)
        discrete = discrete_lambda1(grid)

        assert discrete < lambda1_lower_bound(grid)
        assert discrete == pytest.approx(lambda1_lower_bound(grid), rel=1e-3)

    def test_torsion_bound(self) -> None:
        """(1/4)(|D|/π) with |D| = 16."""
        assert torsion_bound(16.0) == pytest.approx(4.0 / math.pi)

    def test_lambda1_disk(self) -> None:
        """j₀₁² on the unit disk."""
        assert lambda1_disk(1.0) == pytest.approx(2.404825557695773**2)
        assert lambda1_disk(2.0) == pytest.approx(2.404825557695773**2 / 4.0)

    def test_rho_bar(self, f_affine: NonlinearitySpec, f_zero: NonlinearitySpec) -> None:
        """0.99·λ₁/||f||_{W^{1,inf}}; the ceiling applies to f ≡ 0."""
        assert rho_bar(f_affine, 3.0) == pytest.approx(0.99)
        assert rho_bar(f_zero, 3.0) == pytest.approx(1e3)


class TestCheckHypotheses:
    """Tests for check_hypotheses."""

    def test_h1_certifies_rho_1(
        self, f_affine: NonlinearitySpec, g_bump: SourceSpec, grid: Grid2D
    ) -> None:
        """A declared [g0, g1] that the samples respect gives H1 and ρ₁ <= ρ̄."""
        report = check_hypotheses(f_affine, g_bump, 3.0, grid)

        assert report.h1
        assert report.rho_1 is not None
        assert 0.0 < report.rho_1 <= report.rho_bar
        assert report.rho_0 == pytest.approx(min(report.rho_bar, report.rho_1))
        assert report.n_mg == pytest.approx(
            (2.0 + report.rho_bar * 3.0) * report.torsion_bound
        )
        assert report.delta == pytest.approx(0.1 * report.n_mg)

    def test_h2_for_decreasing_x_f(self, f_exp: NonlinearitySpec, grid: Grid2D) -> None:
        """f = -e^{x²} has f(0) < 0 and x f(x) decreasing."""
        report = check_hypotheses(f_exp, constant(0.5), 3.0, grid)

        assert report.h2
        assert report.h4
        assert report.rho_1 is None

    def test_h2_fails_when_f_positive_at_zero(
        self, f_affine: NonlinearitySpec, g_one: SourceSpec, grid: Grid2D
    ) -> None:
        report = check_hypotheses(f_affine, g_one, 3.0, grid)

        assert not report.h2
        assert not report.h4
        assert "h2_violation" in report.witnesses

    def test_require_below(
        self, f_affine: NonlinearitySpec, g_bump: SourceSpec, grid: Grid2D
    ) -> None:
        """ρ at or above the threshold raises HypothesisError."""
        report = check_hypotheses(f_affine, g_bump, 3.0, grid)
        report.require_below(0.5 * report.rho_bar)

        with pytest.raises(HypothesisError):
            report.require_below(report.rho_bar)
        with pytest.raises(HypothesisError):
            report.require_below(-1.0)

    def test_negative_source_is_mirrored(self, f_exp: NonlinearitySpec, grid: Grid2D) -> None:
        """g <= 0 without a declaration switches to the mirrored sign."""
        report = check_hypotheses(f_exp, constant(-1.0), 3.0, grid)

        assert report.sign == -1

    def test_volume_bound_must_be_positive(
        self, f_zero: NonlinearitySpec, g_one: SourceSpec, grid: Grid2D
    ) -> None:
        with pytest.raises(HypothesisError):
            check_hypotheses(f_zero, g_one, 0.0, grid)

    def test_undeclared_source_has_no_rho_1(
        self, f_zero: NonlinearitySpec, grid: Grid2D
    ) -> None:
        report = check_hypotheses(f_zero, radial_gaussian(1.0, 2.0, 0.5), 3.0, grid)

        assert not report.h1
        assert report.rho_1 is None
        assert report.rho_0 == report.rho_bar

    def test_zero_nonlinearity_satisfies_h2(
        self, f_zero: NonlinearitySpec, g_one: SourceSpec, grid: Grid2D
    ) -> None:
        """f ≡ 0: f(0) = 0 and x f(x) is constant."""
        assert check_hypotheses(f_zero, g_one, 3.0, grid).h2


class TestInstabilityCertificate:
    """Tests for certify_instability_hypothesis."""

    def test_one_minus_two_x_certified(self, f_affine: NonlinearitySpec) -> None:
        """1 - 2x >= 0 and f' = -2 on [0, 0.5)."""
        assert certify_instability_hypothesis(f_affine, 0.25)

    def test_fails_when_f_turns_negative(self, f_affine: NonlinearitySpec) -> None:
        assert not certify_instability_hypothesis(f_affine, 0.4)

    def test_fails_for_zero(self, f_zero: NonlinearitySpec) -> None:
        assert not certify_instability_hypothesis(f_zero, 0.25)
