"""Ergodic averages of stored iterates."""

from src.core.blockvec import PrimalDual
from src.core.errors import ParameterError
from src.models.solver import IterationTrace


def running_mean(mean: PrimalDual | None, u: PrimalDual, n: int) -> PrimalDual:
    """Fold the ``n``-th iterate into the mean of the first ``n - 1``."""
    if mean is None:
        return u
    return mean.combine(1.0, u.combine(1.0, mean, -1.0), 1.0 / n)


def ergodic_average(trace: IterationTrace, upto: int) -> PrimalDual:
    """``(1/N) sum_{k=0}^{N-1} u^{k+1}``, accumulated in iteration order."""
    if trace.iterates is None:
        raise ParameterError("ergodic_average needs a trace run with store_iterates")
    if not 1 <= upto <= trace.iterations:
        raise ParameterError(f"N must lie in [1, {trace.iterations}], got {upto}")
    mean: PrimalDual | None = None
    for n in range(1, upto + 1):
        mean = running_mean(mean, trace.iterates[n], n)
    assert mean is not None
    return mean
