"""Tests for the problem config schema and the YAML loader."""

import math
from pathlib import Path

import pytest

from shapeopt.core.errors import ConfigError, HypothesisError
from shapeopt.problem.loader import (
    build_problem,
    load_problem_config,
    parse_problem_config,
    resolve_config_path,
)
from shapeopt.schemas import ErrorReport, ProblemConfig


@pytest.fixture
def write_config(tmp_path: Path):
    def _write(text: str, name: str = "problem.yaml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


class TestProblemConfig:
    """Tests for defaults, validation and hashing."""

    def test_defaults(self) -> None:
        """An empty mapping gives the unit-source, zero-f problem on [-2, 2]²."""
        config = parse_problem_config({})

        assert config.grid.L == 2.0
        assert config.grid.n == 64
        assert config.f.kind == "zero"
        assert config.g.params == {"value": 1.0}
        assert config.volume == pytest.approx(math.pi)
        assert config.radial.modes == 20
        assert config.radial.xi_source == "adjoint"

    def test_unknown_keys_rejected(self) -> None:
        """Typos never fall back to defaults."""
        with pytest.raises(ConfigError, match="grid.cells"):
            parse_problem_config({"grid": {"cells": 32}})

    def test_validation_errors_are_listed(self) -> None:
        """Every pydantic error is carried in the details."""
        with pytest.raises(ConfigError) as excinfo:
            parse_problem_config({"grid": {"n": 4}, "rho": -1.0})

        locations = {error["loc"] for error in excinfo.value.details["errors"]}
        assert {"grid.n", "rho"} <= locations

    def test_volume_must_fit_the_box(self) -> None:
        with pytest.raises(ConfigError, match="exceeds the box area"):
            parse_problem_config({"grid": {"L": 1.0}, "m": 5.0})

    def test_schedule_must_increase(self) -> None:
        with pytest.raises(ConfigError, match="strictly increasing"):
            parse_problem_config({"optimizer": {"M_schedule": [1e3, 1e2]}})

    def test_non_mapping_rejected(self) -> None:
        with pytest.raises(ConfigError, match="mapping"):
            parse_problem_config([1, 2, 3])

    def test_hash_is_stable_and_content_sensitive(self) -> None:
        """Equal configs hash equally; any change moves the hash."""
        first = parse_problem_config({"rho": 0.01})
        second = ProblemConfig(rho=0.01)
        third = parse_problem_config({"rho": 0.02})

        assert first.config_hash() == second.config_hash()
        assert first.config_hash() != third.config_hash()
        assert len(first.config_hash()) == 12

    def test_overrides_revalidate(self) -> None:
        """CLI overrides replace single fields and keep the rest."""
        config = parse_problem_config({"grid": {"L": 3.0}, "probes": {"trials": 5}})

        updated = config.with_overrides(grid=32, modes=12, seed=9)

        assert updated.grid.n == 32
        assert updated.grid.L == 3.0
        assert updated.radial.modes == 12
        assert updated.probes.seed == 9
        assert updated.probes.trials == 5
        assert config.with_overrides() is config


class TestLoader:
    """Tests for YAML loading and problem construction."""

    def test_bare_name_resolves_in_configs_directory(self, configs_dir: Path) -> None:
        """'ball_g1' finds configs/ball_g1.yaml."""
        assert resolve_config_path("ball_g1") == configs_dir / "ball_g1.yaml"

    def test_missing_file(self) -> None:
        with pytest.raises(ConfigError, match="config file not found"):
            load_problem_config("no_such_problem.yaml")

    def test_malformed_yaml(self, write_config) -> None:
        path = write_config("grid: [unclosed\n")

        with pytest.raises(ConfigError, match="malformed YAML"):
            load_problem_config(path)

    def test_empty_file_gives_defaults(self, write_config) -> None:
        assert load_problem_config(write_config("")).grid.n == 64

    @pytest.mark.parametrize(
        "name", ["ball_g1", "ball_g2mr", "instability", "solve_disk", "optimize_gaussian"]
    )
    def test_shipped_configs_build(self, configs_dir: Path, name: str) -> None:
        """Every config in the repository loads and builds."""
        problem = build_problem(load_problem_config(configs_dir / f"{name}.yaml"))

        assert problem.grid.cells_per_side == problem.config.grid.n
        assert problem.m > 0

    def test_unknown_nonlinearity_kind(self, write_config) -> None:
        path = write_config("f:\n  kind: cubic\n")

        with pytest.raises(ConfigError):
            load_problem_config(path)

    def test_contradictory_h1_declaration(self, write_config) -> None:
        """g0 > g1 is refused when the source is built."""
        path = write_config("g:\n  kind: constant\n  h1: [2.0, 1.0]\n")

        with pytest.raises(HypothesisError):
            build_problem(load_problem_config(path))


class TestErrorReport:
    def test_report_carries_exit_code(self) -> None:
        report = ErrorReport(error="ConfigError", message="bad", exit_code=1, details={})

        assert report.model_dump()["exit_code"] == 1
