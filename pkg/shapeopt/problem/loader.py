"""YAML problem loader: config files to validated ProblemConfig and built problems."""

from dataclasses import dataclass
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError
import yaml

from shapeopt.core.errors import ConfigError
from shapeopt.fields.grid import Grid2D, make_grid
from shapeopt.problem.nonlinearity import NonlinearitySpec, build_nonlinearity
from shapeopt.problem.source import SourceSpec, build_source
from shapeopt.schemas.problem import ProblemConfig

logger = logging.getLogger(__name__)

CONFIG_SUFFIXES = (".yaml", ".yml")


def get_configs_directory() -> Path:
    """Get the configs directory at project root.

    Raises:
        FileNotFoundError: If the configs directory doesn't exist
    """
    project_root = Path(__file__).parent.parent.parent
    configs_dir = project_root / "configs"
    if not configs_dir.exists():
        raise FileNotFoundError(f"Configs directory not found at {configs_dir}.")
    return configs_dir


def resolve_config_path(path: str | Path) -> Path:
    """Resolve a config path; bare names are looked up in the configs directory.

    Raises:
        ConfigError: If no file matches.
    """
    candidate = Path(path)
    if candidate.is_file():
        return candidate
    if not candidate.is_absolute() and len(candidate.parts) == 1:
        try:
            configs_dir = get_configs_directory()
        except FileNotFoundError:
            configs_dir = None
        if configs_dir is not None:
            for name in (candidate.name, *(candidate.stem + s for s in CONFIG_SUFFIXES)):
                if (configs_dir / name).is_file():
                    return configs_dir / name
    raise ConfigError(f"config file not found: {path}", path=str(path))


def parse_problem_config(data: Any, source: str = "<memory>") -> ProblemConfig:
    """Validate a mapping loaded from YAML.

    Raises:
        ConfigError: If the data is not a mapping or fails validation.
    """
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of sections", path=source)
    try:
        return ProblemConfig.model_validate(data)
    except ValidationError as e:
        errors = [
            {"loc": ".".join(str(p) for p in err["loc"]), "msg": err["msg"]} for err in e.errors()
        ]
        first = errors[0]
        raise ConfigError(
            f"invalid config {source}: {first['loc']}: {first['msg']}",
            path=source,
            errors=errors,
        ) from e


def load_problem_config(path: str | Path) -> ProblemConfig:
    """Load and validate a YAML problem definition.

    Raises:
        ConfigError: If the file is missing, unreadable, not YAML or invalid.
    """
    resolved = resolve_config_path(path)
    try:
        with open(resolved, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed YAML in {resolved}: {e}", path=str(resolved)) from e
    except OSError as e:
        raise ConfigError(f"cannot read {resolved}: {e}", path=str(resolved)) from e

    config = parse_problem_config(data, str(resolved))
    logger.debug(
        "Loaded problem config", extra={"path": str(resolved), "config_hash": config.config_hash()}
    )
    return config


@dataclass(frozen=True, eq=False)
class Problem:
    """Numerical objects built from a ProblemConfig."""

    config: ProblemConfig
    grid: Grid2D
    f: NonlinearitySpec
    g: SourceSpec

    @property
    def m(self) -> float:
        return self.config.volume


def build_problem(config: ProblemConfig) -> Problem:
    """Instantiate grid, nonlinearity and source.

    Raises:
        ConfigError: If a library entry rejects its parameters.
        GridError: If the grid is invalid.
        HypothesisError: If the H1 declaration is contradictory.
    """
    grid = make_grid(config.grid.L, config.grid.n)
    f = build_nonlinearity(config.f.kind, config.f.params)
    g = build_source(config.g.kind, config.g.params, config.g.h1, config.g.sign)
    return Problem(config, grid, f, g)


__all__ = [
    "Problem",
    "build_problem",
    "get_configs_directory",
    "load_problem_config",
    "parse_problem_config",
    "resolve_config_path",
]
