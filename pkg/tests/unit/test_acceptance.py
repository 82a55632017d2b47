"""Tests for the acceptance registry, command dispatch and the error hierarchy."""

import pytest

from shapeopt.core.errors import (
    EXIT_NONCONVERGENCE,
    EXIT_PRECONDITION,
    ConfigError,
    ConvergenceError,
    GridError,
    HypothesisError,
    PreconditionError,
    SolverBreakdownError,
)
from shapeopt.services.acceptance import CHECKS, run_acceptance
from shapeopt.services.dispatch import COMMAND_NAMES, get_command


class TestAcceptanceRegistry:
    def test_registry_order(self) -> None:
        """Closed-form anchors run before the property probes."""
        names = list(CHECKS)

        assert names[:3] == ["radial_state", "spectrum_closed_form", "stable_example"]
        assert names[-1] == "mode_growth"
        assert len(names) == 11

    def test_unknown_check_rejected(self) -> None:
        with pytest.raises(PreconditionError, match="nope") as excinfo:
            run_acceptance(["radial_state", "nope"])

        assert "radial_state" in excinfo.value.details["known"]

    def test_single_check_runs(self) -> None:
        """The torsion anchor passes on its own."""
        (result,) = run_acceptance(["radial_state"])

        assert result.name == "radial_state"
        assert result.passed
        assert result.seconds >= 0.0
        assert "max_err" in result.measured


class TestDispatch:
    def test_every_command_is_registered(self) -> None:
        assert set(COMMAND_NAMES) == {
            "solve",
            "optimize",
            "stability",
            "instability-demo",
            "validate",
        }
        for name in COMMAND_NAMES:
            assert get_command(name).name == name

    def test_unknown_command(self) -> None:
        with pytest.raises(PreconditionError, match="unknown command"):
            get_command("explode")


class TestErrorHierarchy:
    """Exit codes ride on the exception classes."""

    @pytest.mark.parametrize(
        ("error", "code"),
        [
            (PreconditionError("bad"), EXIT_PRECONDITION),
            (GridError("bad"), EXIT_PRECONDITION),
            (ConfigError("bad", path="x.yaml"), EXIT_PRECONDITION),
            (HypothesisError("bad", "h1"), EXIT_PRECONDITION),
            (SolverBreakdownError("bad"), EXIT_NONCONVERGENCE),
            (ConvergenceError("bad", "cg", 10, 1e-3), EXIT_NONCONVERGENCE),
        ],
    )
    def test_exit_codes(self, error: Exception, code: int) -> None:
        assert error.exit_code == code

    def test_details_carry_keyword_fields(self) -> None:
        error = ConvergenceError("cap", "picard", 500, 1e-3, M=100.0)

        assert error.details == {
            "solver": "picard",
            "iterations": 500,
            "residual": 1e-3,
            "M": 100.0,
        }
        assert HypothesisError("out", "rho_bar").details["hypothesis"] == "rho_bar"

    def test_grid_error_is_a_value_error(self) -> None:
        assert isinstance(GridError("bad"), ValueError)
