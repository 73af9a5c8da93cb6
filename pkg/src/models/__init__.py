"""Data models module.

This module re-exports all Pydantic models for easy importing:
    from src.models import StepLengths, Certificate, IterationTrace, ...
"""

from src.models.certificate import Certificate, Rule, Verdict
from src.models.diagnostics import (
    CauchyReport,
    DescentReport,
    DivergenceValue,
    GrowthGap,
    InertialDescentReport,
    ProbeReport,
    RateFit,
    SampleRegion,
)
from src.models.problem import CouplingConstants, ReferencePoint, Region
from src.models.run_config import IOConfig, RunConfig
from src.models.solver import IterationRecord, IterationTrace, SolverOptions, StopReason
from src.models.steps import StepLengths

__all__ = [
    # steps
    "StepLengths",
    # certificate
    "Certificate",
    "Rule",
    "Verdict",
    # problem
    "CouplingConstants",
    "Region",
    "ReferencePoint",
    # solver
    "SolverOptions",
    "IterationRecord",
    "IterationTrace",
    "StopReason",
    # diagnostics
    "DivergenceValue",
    "SampleRegion",
    "ProbeReport",
    "CauchyReport",
    "DescentReport",
    "InertialDescentReport",
    "GrowthGap",
    "RateFit",
    # run_config
    "IOConfig",
    "RunConfig",
]
