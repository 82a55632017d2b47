"""Problem definition schema: the YAML config validated into typed sections."""

import hashlib
import json
import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from shapeopt.problem.nonlinearity import NonlinearityKind
from shapeopt.problem.source import SourceKind
from shapeopt.services.radial import XiSource


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridSection(Section):
    """Box D = [-L, L]² split into n × n cells."""

    L: float = Field(default=2.0, gt=0.0, description="Half-width of the box")
    n: int = Field(default=64, ge=8, description="Cells per side")


class NonlinearitySection(Section):
    kind: NonlinearityKind = Field(default="zero", description="Library entry for f")
    params: dict[str, Any] = Field(default_factory=dict)


class SourceSection(Section):
    kind: SourceKind = Field(default="constant", description="Radial source profile g")
    params: dict[str, Any] = Field(default_factory=lambda: {"value": 1.0})
    h1: tuple[float, float] | None = Field(
        default=None,
        description="Declared bounds 0 < g0 <= g <= g1",
    )
    sign: Literal[1, -1] = Field(default=1, description="-1 to work with -g and -f")


class RadialSection(Section):
    R: float = Field(default=1.0, gt=0.0, description="Radius of the ball")
    n_r: int = Field(default=4096, ge=64, description="Radial intervals")
    modes: int = Field(default=20, ge=8, description="Number of Fourier modes K")
    xi_source: XiSource = "adjoint"


class OptimizerSection(Section):
    M_schedule: list[float] = Field(default_factory=lambda: [1e2, 1e3, 1e4])
    max_iterations: int = Field(default=500, ge=1)
    tolerance: float = Field(default=1e-6, gt=0.0)
    armijo: float = Field(default=1e-4, gt=0.0, lt=1.0)
    initial_step_fraction: float = Field(default=0.5, gt=0.0)

    @field_validator("M_schedule")
    @classmethod
    def _increasing(cls, value: list[float]) -> list[float]:
        if not value or any(m < 0 for m in value):
            raise ValueError("M_schedule must be a non-empty list of non-negative values")
        if any(b <= a for a, b in zip(value, value[1:], strict=False)):
            raise ValueError("M_schedule must be strictly increasing")
        return value


class ProbeSection(Section):
    trials: int = Field(default=20, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    Ms: list[float] = Field(default_factory=lambda: [1e2, 1e3, 1e4, 1e5])
    rho_list: list[float] = Field(default_factory=lambda: [1e-3, 3e-3, 1e-2])
    workers: int | None = Field(default=None, ge=1)

    @field_validator("rho_list")
    @classmethod
    def _non_negative(cls, value: list[float]) -> list[float]:
        if not value or any(rho < 0 for rho in value):
            raise ValueError("rho_list must be a non-empty list of non-negative values")
        return value


class ProblemConfig(Section):
    """A complete problem definition.

    Sections mirror the top-level keys of a config file. Unknown keys are
    rejected so that typos never fall back to defaults silently.
    """

    version: str = "1"
    grid: GridSection = Field(default_factory=GridSection)
    f: NonlinearitySection = Field(default_factory=NonlinearitySection)
    g: SourceSection = Field(default_factory=SourceSection)
    m: float | None = Field(default=None, gt=0.0, description="Volume bound; default π")
    rho: float = Field(default=0.0, ge=0.0)
    M: float = Field(default=1e3, ge=0.0, description="Penalization strength")
    radial: RadialSection = Field(default_factory=RadialSection)
    optimizer: OptimizerSection = Field(default_factory=OptimizerSection)
    probes: ProbeSection = Field(default_factory=ProbeSection)

    @model_validator(mode="after")
    def _volume_fits_box(self) -> "ProblemConfig":
        if self.m is not None and self.m > (2.0 * self.grid.L) ** 2:
            raise ValueError("volume bound m exceeds the box area")
        return self

    @property
    def volume(self) -> float:
        return self.m if self.m is not None else math.pi

    def config_hash(self) -> str:
        """First 12 hex digits of SHA-256 over the canonical JSON dump."""
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]

    def with_overrides(
        self, *, grid: int | None = None, modes: int | None = None, seed: int | None = None
    ) -> "ProblemConfig":
        """Apply CLI overrides, re-validating the touched sections."""
        update: dict[str, Any] = {}
        if grid is not None:
            update["grid"] = GridSection(L=self.grid.L, n=grid)
        if modes is not None:
            update["radial"] = RadialSection(**{**self.radial.model_dump(), "modes": modes})
        if seed is not None:
            update["probes"] = ProbeSection(**{**self.probes.model_dump(), "seed": seed})
        return self.model_copy(update=update) if update else self


__all__ = [
    "GridSection",
    "NonlinearityKind",
    "NonlinearitySection",
    "OptimizerSection",
    "ProbeSection",
    "ProblemConfig",
    "RadialSection",
    "SourceKind",
    "SourceSection",
]
