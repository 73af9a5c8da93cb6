"""Fejer and descent monitors along a trace."""

from collections.abc import Sequence

import structlog

from src.config.settings import get_settings
from src.core.blockvec import PrimalDual
from src.core.errors import ParameterError
from src.diagnostics.ergodic import ergodic_average
from src.diagnostics.gaps import lagrangian_gap
from src.models.diagnostics import DescentReport, InertialDescentReport
from src.models.solver import IterationTrace
from src.models.steps import StepLengths
from src.problems.saddle import SaddleProblem

logger = structlog.get_logger(__name__)


def monitor_tolerance(*terms: float) -> float:
    """Absolute slack plus a slack relative to the largest participating term."""
    settings = get_settings()
    scale = max((abs(t) for t in terms), default=0.0)
    return settings.monitor_abs_tol + settings.monitor_rel_tol * scale


def fejer_residual(
    p: SaddleProblem,
    steps: StepLengths,
    ubar: PrimalDual,
    u_k: PrimalDual,
    u_k1: PrimalDual,
    gap_value: float,
) -> float:
    """``B0(ubar, u^k) - [B0(ubar, u^{k+1}) + B0(u^{k+1}, u^k) + gap]``."""
    J = p.generator(steps)
    before = J.divergence(ubar.concat(), u_k.concat())
    after = J.divergence(ubar.concat(), u_k1.concat())
    step = J.divergence(u_k1.concat(), u_k.concat())
    return before - (after + step + gap_value)


def _stored(trace: IterationTrace, n: int) -> tuple[PrimalDual, ...]:
    if trace.iterates is None:
        raise ParameterError("descent checks need a trace run with store_iterates")
    if not 1 <= n <= trace.iterations:
        raise ParameterError(f"N must lie in [1, {trace.iterations}], got {n}")
    return trace.iterates


def _telescoped(
    p: SaddleProblem, steps: StepLengths, ubar: PrimalDual, iterates: Sequence[PrimalDual], n: int
) -> tuple[float, float, float]:
    """``B0(ubar, u^0)``, ``B0(ubar, u^N)`` and ``sum_{k<N} B0(u^{k+1}, u^k)``."""
    J = p.generator(steps)
    z = ubar.concat()
    start = J.divergence(z, iterates[0].concat())
    end = J.divergence(z, iterates[n].concat())
    steps_sum = 0.0
    for k in range(n):
        steps_sum += J.divergence(iterates[k + 1].concat(), iterates[k].concat())
    return start, end, steps_sum


def trace_gaps(p: SaddleProblem, trace: IterationTrace, ubar: PrimalDual) -> list[float]:
    """Lagrangian gaps ``G(u^{k+1}, ubar)`` for every stored step."""
    if trace.iterates is None:
        raise ParameterError("trace_gaps needs a trace run with store_iterates")
    return [lagrangian_gap(p, u, ubar) for u in trace.iterates[1:]]


def descent_check(
    trace: IterationTrace,
    p: SaddleProblem,
    steps: StepLengths,
    ubar: PrimalDual,
    gaps: Sequence[float],
    n: int,
) -> DescentReport:
    """``B0(ubar, u^N) + sum B0(u^{k+1}, u^k) + sum gap_k <= B0(ubar, u^0)``.

    ``gaps[k]`` is the gap at ``u^{k+1}``. Also evaluates the ergodic bound
    ``G_L(u~^N, ubar) <= B0(ubar, u^0) / N``.
    """
    iterates = _stored(trace, n)
    if len(gaps) < n:
        raise ParameterError(f"{len(gaps)} gap values for N={n}")
    start, end, steps_sum = _telescoped(p, steps, ubar, iterates, n)
    gap_sum = sum(gaps[:n])
    lhs = end + steps_sum + gap_sum
    tolerance = monitor_tolerance(start, end, steps_sum, gap_sum)
    ergodic_gap = lagrangian_gap(p, ergodic_average(trace, n), ubar)
    report = DescentReport(
        n=n,
        lhs=lhs,
        rhs=start,
        tolerance=tolerance,
        ergodic_gap=ergodic_gap,
        ergodic_bound=start / n,
    )
    if not report.holds or report.ergodic_holds is False:
        logger.warning("descent_violated", problem=p.name, n=n, lhs=lhs, rhs=start, ergodic_gap=ergodic_gap)
    return report


def inertial_descent_check(
    trace: IterationTrace,
    p: SaddleProblem,
    steps: StepLengths,
    ubar: PrimalDual,
    gaps: Sequence[float],
    n: int,
    beta: float | None = None,
) -> InertialDescentReport:
    """``eps B0(ubar, u^N) + eps sum B0(u^{k+1}, u^k) + sum gap_k <= (1 - lambda_1) B0(ubar, u^0)``.

    ``eps = 1 - max_{0 <= k <= N} (lambda_k beta + 2 lambda_{k+1})`` with
    ``lambda_0 = 0``; ``beta`` defaults to the problem's Cauchy factor.
    """
    iterates = _stored(trace, n)
    if len(gaps) < n:
        raise ParameterError(f"{len(gaps)} gap values for N={n}")
    beta = beta if beta is not None else p.constants.beta
    if beta is None:
        raise ParameterError(f"{p.name}: inertial descent needs the Cauchy factor beta")
    lam = [0.0] + [steps.lam(k) for k in range(1, n + 2)]
    epsilon = 1.0 - max(lam[k] * beta + 2 * lam[k + 1] for k in range(n + 1))
    start, end, steps_sum = _telescoped(p, steps, ubar, iterates, n)
    gap_sum = sum(gaps[:n])
    lhs = epsilon * end + epsilon * steps_sum + gap_sum
    rhs = (1.0 - lam[1]) * start
    report = InertialDescentReport(
        n=n, epsilon=epsilon, lhs=lhs, rhs=rhs, tolerance=monitor_tolerance(start, end, steps_sum, gap_sum)
    )
    if not report.holds:
        logger.warning("inertial_descent_violated", problem=p.name, n=n, lhs=lhs, rhs=rhs, epsilon=epsilon)
    return report
