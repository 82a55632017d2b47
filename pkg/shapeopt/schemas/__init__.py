"""Pydantic schemas: problem definitions and JSON reports."""

from shapeopt.schemas.problem import (
    GridSection,
    NonlinearitySection,
    OptimizerSection,
    ProbeSection,
    ProblemConfig,
    RadialSection,
    SourceSection,
)
from shapeopt.schemas.reports import (
    AcceptanceRow,
    ArtifactReport,
    ErrorReport,
    HypothesisSummary,
    InstabilitySummary,
    ModeRow,
    OptimizeReport,
    SolveReport,
    StabilitySummary,
    ValidateReport,
)

__all__ = [
    "AcceptanceRow",
    "ArtifactReport",
    "ErrorReport",
    "GridSection",
    "HypothesisSummary",
    "InstabilitySummary",
    "ModeRow",
    "NonlinearitySection",
    "OptimizeReport",
    "OptimizerSection",
    "ProbeSection",
    "ProblemConfig",
    "RadialSection",
    "SolveReport",
    "SourceSection",
    "StabilitySummary",
    "ValidateReport",
]
