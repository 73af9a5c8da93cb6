"""Operator-norm estimation by power iteration on ``A^* A``."""

from collections.abc import Callable

import numpy as np
import structlog

from src.config.settings import get_settings
from src.core.blockvec import FloatArray
from src.core.errors import ParameterError
from src.core.operators import LinearOperator

logger = structlog.get_logger(__name__)

ADJOINT_RTOL = 1e-8


def estimate_operator_norm(
    apply: Callable[[FloatArray], FloatArray],
    adjoint: Callable[[FloatArray], FloatArray],
    domain_shape: tuple[int, ...],
    iters: int | None = None,
    seed: int = 0,
) -> float:
    """Estimate ``||A||`` from ``iters`` power iterations on ``A^* A``.

    The pair ``(apply, adjoint)`` is first checked on one random pair:
    ``<A x, y> = <x, A^* y>`` to relative accuracy 1e-8.
    """
    iters = iters if iters is not None else get_settings().power_iterations
    if iters < 1:
        raise ParameterError(f"iters must be at least 1, got {iters}")
    rng = np.random.default_rng(seed)

    x = rng.standard_normal(domain_shape)
    ax = np.asarray(apply(x), dtype=np.float64)
    y = rng.standard_normal(ax.shape)
    lhs = float(np.vdot(ax, y))
    rhs = float(np.vdot(x, np.asarray(adjoint(y), dtype=np.float64)))
    if abs(lhs - rhs) > ADJOINT_RTOL * max(1.0, abs(lhs), abs(rhs)):
        raise ParameterError(f"apply/adjoint are not an adjoint pair: <Ax,y>={lhs!r} vs <x,A*y>={rhs!r}")

    v = rng.standard_normal(domain_shape)
    v /= np.linalg.norm(v)
    rayleigh = 0.0
    for _ in range(iters):
        w = np.asarray(adjoint(apply(v)), dtype=np.float64).reshape(domain_shape)
        rayleigh = float(np.vdot(v, w))
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
    estimate = float(np.sqrt(max(rayleigh, 0.0)))
    logger.debug("operator_norm_estimated", estimate=estimate, iters=iters)
    return estimate


def operator_norm(op: LinearOperator, iters: int | None = None, seed: int = 0) -> float:
    """The closed-form norm when the operator knows it, otherwise a power-iteration estimate."""
    if op.norm is not None:
        return op.norm
    return estimate_operator_norm(op, op.adjoint, op.domain_shape, iters, seed)
