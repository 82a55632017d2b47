"""Tests for the stability verdict, the first-order expansion and the convergence studies."""

import math

import numpy as np
import pytest

from shapeopt.core.errors import HypothesisError, PreconditionError
from shapeopt.problem.nonlinearity import NonlinearitySpec
from shapeopt.problem.source import SourceSpec
from shapeopt.services.radial import RadialGrid, solve_radial_state_adjoint, solve_spectrum
from shapeopt.services.stability import (
    Verdict,
    elliptic_estimate_slopes,
    instability_demo,
    mode_audit,
    perturbation_slope,
    self_convergence_ratio,
    stability_verdict,
)

SIGMA = -7.0 / 32.0


class TestStabilityVerdict:
    """Tests for ω_{1..K,ρ} and the classification of the ball."""

    def test_ball_is_marginal_without_nonlinearity(
        self, unit_ball: RadialGrid, f_zero: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        """g = 1 and ρ = 0: ω₁ = 0, all higher modes positive."""
        rs = solve_radial_state_adjoint(unit_ball, 0.0, f_zero, g_one)

        report = stability_verdict(rs, 0.0, f_zero, g_one, 8)

        assert report.verdict is Verdict.MARGINALLY_STABLE
        assert len(report.spectrum) == 8
        assert min(report.spectrum[1:]) > 0.0
        assert report.c1 == pytest.approx(0.0, abs=1e-5)
        assert report.omega1_drift == 0.0

    def test_decreasing_source_is_stable(
        self, fine_ball: RadialGrid, f_zero: NonlinearitySpec, g_linear: SourceSpec
    ) -> None:
        """g = 2 - r has c1 = 1/3 > 0 although the factor-two condition fails."""
        rs = solve_radial_state_adjoint(fine_ball, 0.0, f_zero, g_linear)

        report = stability_verdict(rs, 0.0, f_zero, g_linear, 8)

        assert report.verdict is Verdict.STABLE
        assert report.c1 == pytest.approx(1.0 / 3.0, abs=1e-4)
        assert report.source_integral == pytest.approx(4.0 * math.pi / 3.0, rel=1e-6)
        assert not report.sufficient_condition
        assert report.coercivity is not None
        assert report.coercivity > 0.0
        assert report.flux_bound_holds

    def test_small_rho_destabilizes(
        self, unit_ball: RadialGrid, f_affine: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        """f = 1 - 2x pushes ω₁ below zero for ρ = 0.01."""
        rs = solve_radial_state_adjoint(unit_ball, 0.01, f_affine, g_one)

        report = stability_verdict(rs, 0.01, f_affine, g_one, 8, xi_source="literal")

        assert report.verdict is Verdict.UNSTABLE
        assert report.omega1 < -report.tolerance
        assert report.omega1_at_zero == pytest.approx(0.0, abs=1e-6)
        assert report.mode_comparison_holds
        assert report.xi_source == "literal"

    def test_growth_slope_is_quarter_pi(
        self, fine_ball: RadialGrid, f_zero: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        """ω_k grows like πk/4 in the tail."""
        rs = solve_radial_state_adjoint(fine_ball, 0.0, f_zero, g_one)

        report = stability_verdict(rs, 0.0, f_zero, g_one, 12, workers=2)

        assert report.growth_slope == pytest.approx(math.pi / 4.0, rel=0.02)

    def test_too_few_modes_rejected(
        self, unit_ball: RadialGrid, f_zero: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        rs = solve_radial_state_adjoint(unit_ball, 0.0, f_zero, g_one)

        with pytest.raises(PreconditionError, match="at least 8 modes"):
            stability_verdict(rs, 0.0, f_zero, g_one, 4)


class TestModeAudit:
    """Tests for the comparison properties of ψ_k."""

    def test_audit_passes_on_the_ball(
        self, unit_ball: RadialGrid, f_exp: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        """ψ_k >= 0, ψ'_k(R) ordered and growing at least like k/√2."""
        rs = solve_radial_state_adjoint(unit_ball, 0.05, f_exp, g_one)

        audit = mode_audit(rs, 0.05, f_exp, 8)

        assert audit.positive
        assert audit.ordered
        assert audit.grows_linearly
        assert audit.passed

    def test_precomputed_modes_are_reused(
        self, unit_ball: RadialGrid, f_zero: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        """At ρ = 0, ψ'_k(R) = k/2 so the ordering gap is exactly zero at k = 1."""
        rs = solve_radial_state_adjoint(unit_ball, 0.0, f_zero, g_one)
        modes = solve_spectrum(rs, 8, 0.0, f_zero)

        audit = mode_audit(rs, 0.0, f_zero, modes=modes)

        assert audit.ordering_gap == pytest.approx(0.0, abs=1e-12)
        assert audit.passed


# =============================================================================
# First-order expansion and instability
# =============================================================================


class TestPerturbationSlope:
    """Tests for φ₁, y₁, z₁, w₁ and σ on the unit ball."""

    def test_sigma_for_one_minus_two_x(self, f_affine: NonlinearitySpec, g_one: SourceSpec) -> None:
        """σ = (w₁ + w₁')(1)/4 = -7/32."""
        bundle = perturbation_slope(f_affine, g_one)

        assert bundle.sigma == pytest.approx(SIGMA, abs=1e-4)
        assert bundle.omega1_slope == pytest.approx(2.0 * math.pi * SIGMA, abs=1e-3)
        assert bundle.flux_integral == pytest.approx(3.0 / 8.0, abs=1e-6)

    def test_profiles_match_closed_forms(
        self, f_affine: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        """y₁, z₁ and w₁ are odd cubics; w₁ = y₁ + z₁."""
        bundle = perturbation_slope(f_affine, g_one, n_r=1024)
        r = bundle.grid.nodes

        np.testing.assert_allclose(bundle.y1, -r / 4 - r**3 / 8, atol=1e-5)
        np.testing.assert_allclose(bundle.z1, -r / 16 + r**3 / 16, atol=1e-5)
        np.testing.assert_allclose(bundle.w1, -5 * r / 16 - r**3 / 16, atol=1e-5)
        assert bundle.superposition_error < 1e-9
        assert bundle.phi1[-1] == 0.0

    def test_requires_unit_ball_with_unit_source(
        self, f_affine: NonlinearitySpec, g_linear: SourceSpec, g_one: SourceSpec
    ) -> None:
        with pytest.raises(HypothesisError) as excinfo:
            perturbation_slope(f_affine, g_linear)
        assert excinfo.value.hypothesis == "unit_ball"

        with pytest.raises(HypothesisError):
            perturbation_slope(f_affine, g_one, R=2.0)


class TestInstabilityDemo:
    """Tests for ω_{1,ρ} < 0 along a list of ρ."""

    def test_ratios_approach_sigma(self) -> None:
        """ρ = 0 is marginal; positive ρ is unstable with ratio near σ."""
        report = instability_demo([0.0, 1e-3, 3e-3], n_r=1024)

        zero_row, *rows = report.rows
        assert zero_row.marginal
        assert zero_row.ratio is None
        assert zero_row.omega1 == pytest.approx(0.0, abs=1e-6)
        assert all(row.unstable for row in rows)
        assert rows[0].relative_error is not None
        assert rows[0].relative_error < 0.03
        assert report.all_unstable
        assert report.sigma == pytest.approx(SIGMA, abs=1e-4)
        assert report.normal_velocity == "cos(theta)"

    def test_uncertified_nonlinearity_rejected(self, f_zero: NonlinearitySpec) -> None:
        """f ≡ 0 has no slope below -1."""
        with pytest.raises(HypothesisError) as excinfo:
            instability_demo([1e-3], f=f_zero)

        assert excinfo.value.hypothesis == "instability"


# =============================================================================
# Convergence studies
# =============================================================================


class TestConvergenceStudies:
    """Tests for the ρ-orders and grid self-convergence."""

    @pytest.mark.slow
    def test_elliptic_estimate_orders(self) -> None:
        """sup|ϕ'| and sup|ξ'| scale like ρ, sup|ζ'| like ρ²."""
        report = elliptic_estimate_slopes([1e-3, 3e-3, 1e-2, 3e-2, 1e-1])

        assert report.adjoint_slope == pytest.approx(1.0, abs=0.15)
        assert report.xi_slope == pytest.approx(1.0, abs=0.15)
        assert report.zeta_slope == pytest.approx(2.0, abs=0.15)
        assert report.passed

    def test_slopes_need_positive_rhos(self) -> None:
        with pytest.raises(PreconditionError):
            elliptic_estimate_slopes([0.0, 1e-2])

    def test_self_convergence_is_second_order(
        self, f_exp: NonlinearitySpec, g_linear: SourceSpec
    ) -> None:
        """Doubling n_r divides the errors by four."""
        report = self_convergence_ratio(0.05, f_exp, g_linear, n_r=128)

        assert report.points == (128, 256, 512)
        assert report.ratios["phi"] == pytest.approx(4.0, rel=0.15)
        assert report.ratios["adjoint"] == pytest.approx(4.0, rel=0.15)

    def test_exact_profiles_report_no_ratio(
        self, f_zero: NonlinearitySpec, g_one: SourceSpec
    ) -> None:
        """Quadratic states and vanishing corrections are exact on every grid."""
        report = self_convergence_ratio(0.0, f_zero, g_one, n_r=64, k=1)

        assert report.ratios["phi"] is None
        assert report.ratios["xi"] is None
        assert report.ratios["zeta"] is None
