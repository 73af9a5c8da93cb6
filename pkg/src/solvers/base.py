"""Shared iteration driver.

A solver is built once per run and then driven by :meth:`SaddleSolver.run`:

>>> trace = PDPS(problem, steps, options).run(u0)

Subclasses implement :meth:`SaddleSolver.step`, one iteration
``u^k -> u^{k+1}``, and may override :meth:`SaddleSolver.validate` and
:meth:`SaddleSolver.start`. The driver owns stopping, monitoring, ergodic
averaging and numeric-failure capture.
"""

import math
import time
from abc import ABC, abstractmethod
from typing import ClassVar

import structlog

from src.core.blockvec import PrimalDual
from src.core.errors import CertificateRejected, NumericFailure, ParameterError
from src.diagnostics.ergodic import running_mean
from src.diagnostics.gaps import growth_value, lagrangian_gap
from src.diagnostics.monitors import fejer_residual, monitor_tolerance
from src.models.certificate import Certificate
from src.models.problem import Region
from src.models.run_config import SolverName
from src.models.solver import IterationRecord, IterationTrace, SolverOptions, StopReason
from src.models.steps import StepLengths
from src.problems.saddle import SaddleProblem, optimality_residual
from src.steprules.auto import certify_run

logger = structlog.get_logger(__name__)

# Rules whose constants assume the dual iterates stay in the ball of radius rho_y.
DUAL_BALL_RULES = ("affine_y", "combined", "two_block")


def _finite_or_none(name: str, value: float | None, k: int) -> float | None:
    if value is None or math.isfinite(value):
        return value
    logger.warning("monitor_not_finite", monitor=name, iteration=k, value=value)
    return None


class SaddleSolver(ABC):
    """One run of a primal-dual splitting method on one problem."""

    name: ClassVar[SolverName]
    fejer_monitor: ClassVar[bool] = True

    def __init__(self, problem: SaddleProblem, steps: StepLengths, options: SolverOptions | None = None) -> None:
        options = options or SolverOptions()
        if options.dual_ball is not None:
            problem = problem.with_dual_ball(options.dual_ball)
        self.validate(problem, steps)
        self.problem = problem
        self.steps = steps
        self.options = options
        self.taus = steps.taus(problem.n_primal)
        self.sigmas = steps.sigmas(problem.n_dual)
        self.certificates = self._certify()
        self._dual_ball = self._dual_ball_region()

    def validate(self, problem: SaddleProblem, steps: StepLengths) -> None:
        """Reject problems or step layouts the method cannot handle."""

    def start(self, u0: PrimalDual) -> None:
        """Reset per-run state before the first step."""

    @abstractmethod
    def step(self, k: int, u: PrimalDual) -> PrimalDual:
        """Compute ``u^{k+1}`` from ``u^k``."""

    def _certify(self) -> tuple[Certificate, ...]:
        try:
            certificates = certify_run(self.problem, self.name, self.steps)
        except ParameterError as exc:
            if not self.options.uncertified:
                raise
            logger.warning("certificate_unavailable", solver=self.name, problem=self.problem.name, reason=str(exc))
            return ()
        failed = [c for c in certificates if not c.passed]
        if failed:
            if not self.options.uncertified:
                raise CertificateRejected(failed[0])
            logger.warning(
                "uncertified_run",
                solver=self.name,
                problem=self.problem.name,
                rules=[c.rule for c in failed],
                margins=[c.margin for c in failed],
            )
        return certificates

    def _dual_ball_region(self) -> Region | None:
        rho_y = self.problem.constants.rho_y
        if not rho_y or not any(c.rule in DUAL_BALL_RULES for c in self.certificates):
            return None
        return Region(y_radius=rho_y)

    def _outside(self, u: PrimalDual) -> bool:
        region = self.problem.region
        if region is not None and not region.contains(u):
            return True
        return self._dual_ball is not None and not self._dual_ball.contains_dual(u.y)

    def _record(self, k: int, u: PrimalDual, prev: PrimalDual | None, started: float) -> IterationRecord:
        p, opts = self.problem, self.options
        residual = optimality_residual(p, self.steps, u)
        b0 = gap = fejer = growth = None
        if opts.reference is not None:
            ubar = opts.reference.u_bar
            b0 = p.b0(self.steps, ubar, u)
            gap = lagrangian_gap(p, u, ubar)
            growth = growth_value(p, u, ubar)
            if prev is not None and self.fejer_monitor:
                fejer = fejer_residual(p, self.steps, ubar, prev, u, growth if opts.fejer_gap == "growth" else gap)
                if fejer < -monitor_tolerance(b0, fejer):
                    logger.warning("fejer_violated", solver=self.name, problem=p.name, iteration=k, margin=fejer)
        return IterationRecord(
            k=k,
            residual=residual,
            b0_to_ref=_finite_or_none("b0_to_ref", b0, k),
            lagrangian_gap=_finite_or_none("lagrangian_gap", gap, k),
            fejer_margin=_finite_or_none("fejer_margin", fejer, k),
            growth_gap=_finite_or_none("growth_gap", growth, k),
            wall_time=time.perf_counter() - started if opts.record_wall_time else None,
        )

    def _converged(self, record: IterationRecord) -> bool:
        return self.options.tol > 0 and record.residual <= self.options.tol

    def run(self, u0: PrimalDual) -> IterationTrace:
        p, opts = self.problem, self.options
        p.check_point(u0)
        if opts.reference is not None:
            p.check_point(opts.reference.u_bar)
        logger.info(
            "solver_start",
            solver=self.name,
            problem=p.name,
            steps=self.steps.to_summary(),
            max_iter=opts.max_iter,
            tol=opts.tol,
        )
        started = time.perf_counter()
        self.start(u0)
        u, k = u0, 0
        records: list[IterationRecord] = []
        iterates = [u0] if opts.store_iterates else None
        mean: PrimalDual | None = None
        region_exits = 0
        stop_reason: StopReason = "max_iter"
        try:
            records.append(self._record(0, u, None, started))
            if self._converged(records[-1]):
                stop_reason = "tol"
            while stop_reason == "max_iter" and k < opts.max_iter:
                u_next = self.step(k, u)
                prev, u, k = u, u_next, k + 1
                if iterates is not None:
                    iterates.append(u)
                if opts.ergodic:
                    mean = running_mean(mean, u, k)
                if self._outside(u):
                    if region_exits == 0:
                        logger.warning("left_certified_region", solver=self.name, problem=p.name, iteration=k)
                    region_exits += 1
                if k % opts.monitor_every == 0 or k == opts.max_iter:
                    records.append(self._record(k, u, prev, started))
                    if self._converged(records[-1]):
                        stop_reason = "tol"
        except NumericFailure as exc:
            stop_reason = "numeric"
            logger.error("numeric_failure", solver=self.name, problem=p.name, iteration=k, component=exc.component)
        trace = IterationTrace(
            solver=self.name,
            records=tuple(records),
            final_u=u,
            final_ergodic=mean,
            stop_reason=stop_reason,
            iterations=k,
            certificates=self.certificates,
            certificate_valid=region_exits == 0,
            region_exits=region_exits,
            iterates=tuple(iterates) if iterates is not None else None,
        )
        logger.info(
            "solver_finish",
            solver=self.name,
            problem=p.name,
            iterations=k,
            stop_reason=stop_reason,
            residual=trace.final_residual,
            region_exits=region_exits,
        )
        return trace
