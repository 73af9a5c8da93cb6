"""Empirical convergence-rate fits."""

from collections.abc import Sequence
from typing import Literal

import numpy as np
import scipy.stats

from src.core.errors import ParameterError
from src.models.diagnostics import RateFit

MIN_SAMPLES = 10


def rate_fit(series: Sequence[tuple[float, float]], model: Literal["power", "geometric"]) -> RateFit:
    """Least-squares fit over the tail half of ``(k, value)`` pairs.

    ``power`` regresses ``log value`` on ``log k`` (the slope is the exponent);
    ``geometric`` regresses ``log value`` on ``k`` (``exp(slope)`` is the ratio).
    """
    if model not in ("power", "geometric"):
        raise ParameterError(f"unknown rate model {model!r}; expected power or geometric")
    if len(series) < MIN_SAMPLES:
        raise ParameterError(f"rate_fit needs at least {MIN_SAMPLES} samples, got {len(series)}")
    data = np.asarray(series, dtype=np.float64)
    k, values = data[:, 0], data[:, 1]
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ParameterError("rate_fit needs finite positive values")
    tail = slice(len(series) // 2, None)
    k, values = k[tail], values[tail]
    if model == "power":
        if np.any(k <= 0):
            raise ParameterError("power fits need positive iteration indices")
        abscissa = np.log(k)
    else:
        abscissa = k
    log_values = np.log(values)
    fit = scipy.stats.linregress(abscissa, log_values)
    residuals = log_values - (fit.intercept + fit.slope * abscissa)
    return RateFit(
        model=model,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(min(max(fit.rvalue**2, 0.0), 1.0)),
        rms_log_residual=float(np.sqrt(np.mean(residuals**2))),
        samples=int(k.size),
    )
