"""BCS critical temperature, Ginzburg-Landau coefficients and GL minimization."""

import json

from ._core import (
    BcsglError,
    CurvePoint,
    ExponentFit,
    GapSolution,
    GLCoefficients,
    GLResult,
    GridConfig,
    ScalingReport,
    TcShift,
    compute_coefficients,
    critical_temperature,
    egl_curve,
    fit_threshold_exponent,
    identity_groups,
    landau_levels,
    minimize_gl,
    scaling_check,
    symbols,
    tc_shift,
)
from ._core import run_identity_suite as _run_identity_suite

__all__ = [
    "BcsglError",
    "CurvePoint",
    "ExponentFit",
    "GapSolution",
    "GLCoefficients",
    "GLResult",
    "GridConfig",
    "ScalingReport",
    "TcShift",
    "compute_coefficients",
    "critical_temperature",
    "egl_curve",
    "fit_threshold_exponent",
    "identity_groups",
    "landau_levels",
    "minimize_gl",
    "run_identity_suite",
    "scaling_check",
    "symbols",
    "tc_shift",
]


def run_identity_suite(groups=(), **kwargs):
    """Runs the identity checks; returns (entries, summary) as dicts."""
    lines = _run_identity_suite(list(groups), **kwargs).splitlines()
    records = [json.loads(line) for line in lines if line]
    return records[:-1], records[-1]["summary"]
