"""Problem data: nonlinearity library, radial sources and hypothesis checks.

The YAML loader lives in ``shapeopt.problem.loader``.
"""

from shapeopt.problem.hypotheses import (
    HypothesisReport,
    certify_instability_hypothesis,
    check_hypotheses,
    discrete_lambda1,
    lambda1_disk,
    lambda1_lower_bound,
    rho_bar,
    torsion_bound,
)
from shapeopt.problem.nonlinearity import NonlinearitySpec, build_nonlinearity, nl_eval
from shapeopt.problem.source import SourceSpec, build_source

__all__ = [
    "HypothesisReport",
    "NonlinearitySpec",
    "SourceSpec",
    "build_nonlinearity",
    "build_source",
    "certify_instability_hypothesis",
    "check_hypotheses",
    "discrete_lambda1",
    "lambda1_disk",
    "lambda1_lower_bound",
    "nl_eval",
    "rho_bar",
    "torsion_bound",
]
