"""JSON report schemas written by the CLI commands."""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class ErrorReport(BaseModel):
    """Written in place of a report when a command fails."""

    error: str = Field(..., description="Exception class name")
    message: str = Field(..., description="Human-readable error message")
    exit_code: int = Field(..., description="Process exit code")
    details: dict[str, Any] | None = Field(default=None, description="Structured error details")


class ArtifactReport(BaseModel):
    """Fields shared by every command report."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    command: str
    tool_version: str
    config_hash: str
    seed: int | None = None


class HypothesisSummary(BaseModel):
    h1: bool
    h2: bool
    h4: bool
    n_mg: float
    rho_bar: float
    rho_1: float | None
    rho_0: float
    lambda1_lb: float
    torsion_bound: float
    sign: int
    witnesses: dict[str, Any] = Field(default_factory=dict)


class SolveReport(ArtifactReport):
    command: Literal["solve"] = "solve"
    rho: float
    M: float
    value: float
    sup_norm: float
    energy_identity_residual: float
    picard_iterations: int
    increments: list[float]
    contraction_ratios: list[float]
    bound_violation: str | None
    hypotheses: HypothesisSummary


class StageSummary(BaseModel):
    M: float
    iterations: int
    stop_reason: str
    value: float
    mass: float
    binariness: float


class OptimizeReport(ArtifactReport):
    command: Literal["optimize"] = "optimize"
    m: float
    rho: float
    stages: list[StageSummary]
    final_value: float | None
    final_mass: float
    mass_gap: float
    stalled: bool
    binariness_flags: list[float]
    hypotheses: HypothesisSummary


class ModeRow(BaseModel):
    k: int
    omega: float
    dpsi_R: float
    dxi_R: float
    dzeta_R: float


class ModeAuditSummary(BaseModel):
    min_psi: float
    ordering_gap: float
    growth_gap: float
    passed: bool


class StabilitySummary(ArtifactReport):
    command: Literal["stability"] = "stability"
    rho: float
    radius: float
    modes: list[ModeRow]
    Lambda: float
    dphi_R: float
    c1: float
    sufficient_condition: bool
    growth_slope: float
    tolerance: float
    verdict: Literal["stable", "marginally-stable", "unstable"]
    omega1: float
    omega1_at_zero: float
    omega1_drift: float
    coercivity: float | None
    mode_comparison_holds: bool
    flux_bound_holds: bool
    xi_source: str
    audit: ModeAuditSummary


class InstabilityRowSummary(BaseModel):
    rho: float
    omega1: float
    ratio: float | None
    relative_error: float | None
    marginal: bool
    unstable: bool


class InstabilitySummary(ArtifactReport):
    command: Literal["instability-demo"] = "instability-demo"
    rows: list[InstabilityRowSummary]
    sigma: float
    rho_threshold: float
    all_unstable: bool
    mode: int
    normal_velocity: str
    xi_source: str


class AcceptanceRow(BaseModel):
    """Timings stay in the console table so that the JSON is reproducible."""

    name: str
    passed: bool
    measured: str
    expected: str


class ValidateReport(ArtifactReport):
    command: Literal["validate"] = "validate"
    results: list[AcceptanceRow]
    passed: bool


__all__ = [
    "AcceptanceRow",
    "ArtifactReport",
    "ErrorReport",
    "HypothesisSummary",
    "InstabilityRowSummary",
    "InstabilitySummary",
    "ModeAuditSummary",
    "ModeRow",
    "OptimizeReport",
    "SolveReport",
    "StabilitySummary",
    "StageSummary",
    "ValidateReport",
]
