"""Gap functionals, growth gaps, Fejer/descent monitors and rate fits."""

from src.diagnostics.ergodic import ergodic_average, running_mean
from src.diagnostics.gaps import (
    block_growth_norm,
    coupling_ak,
    duality_gap_rof,
    growth_gap,
    growth_value,
    lagrangian_gap,
    partial_gap,
)
from src.diagnostics.monitors import (
    descent_check,
    fejer_residual,
    inertial_descent_check,
    monitor_tolerance,
    trace_gaps,
)
from src.diagnostics.rates import rate_fit

__all__ = [
    # gaps
    "lagrangian_gap",
    "partial_gap",
    "coupling_ak",
    "growth_gap",
    "growth_value",
    "block_growth_norm",
    "duality_gap_rof",
    # ergodic averages
    "running_mean",
    "ergodic_average",
    # monitors
    "fejer_residual",
    "descent_check",
    "inertial_descent_check",
    "monitor_tolerance",
    "trace_gaps",
    # rates
    "rate_fit",
]
