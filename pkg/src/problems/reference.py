"""Reference saddle points for the convergence monitors."""

import numpy as np
import scipy.linalg
import structlog

from src.core.blockvec import BlockVector, PrimalDual
from src.core.errors import ProblemError
from src.models.problem import ReferencePoint
from src.models.solver import SolverOptions
from src.models.steps import StepLengths
from src.problems.saddle import SaddleProblem, optimality_residual

logger = structlog.get_logger(__name__)

UNIT_STEPS = StepLengths.single(1.0, 1.0)


def kkt_reference(p: SaddleProblem, tolerance: float = 1e-10, steps: StepLengths = UNIT_STEPS) -> ReferencePoint:
    """Exact saddle point of ``quadratic_saddle`` from ``(I + AᵀA) x = b``, ``y = A x``."""
    if p.name != "quadratic_saddle":
        raise ProblemError(f"kkt_reference needs quadratic_saddle, got {p.name!r}")
    A, b = p.data["A"], p.data["b"]
    x = scipy.linalg.solve(np.eye(A.shape[1]) + A.T @ A, b, assume_a="pos")
    u_bar = PrimalDual(BlockVector([x]), BlockVector([A @ x]))
    residual = optimality_residual(p, steps, u_bar)
    return ReferencePoint(u_bar=u_bar, provenance="kkt-solve", residual=residual, tolerance=tolerance)


def analytic_reference(
    p: SaddleProblem, u_bar: PrimalDual, steps: StepLengths = UNIT_STEPS, tolerance: float = 1e-12
) -> ReferencePoint:
    """Wrap a saddle point known in closed form; its residual is measured and recorded."""
    p.check_point(u_bar)
    residual = optimality_residual(p, steps, u_bar)
    if residual > tolerance:
        logger.warning("analytic_reference_residual", problem=p.name, residual=residual, tolerance=tolerance)
    return ReferencePoint(u_bar=u_bar, provenance="analytic", residual=residual, tolerance=tolerance)


def long_run_reference(
    p: SaddleProblem,
    steps: StepLengths,
    u0: PrimalDual | None = None,
    *,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    monitor_every: int = 50,
) -> ReferencePoint:
    """Run the PDPS (or the modified PDPS when ``K`` is not affine in ``y``) to ``tol``."""
    from src.solvers import solve_modified_pdps, solve_pdps

    solve = solve_pdps if p.affine_in_y else solve_modified_pdps
    opts = SolverOptions(max_iter=max_iter, tol=tol, monitor_every=monitor_every, uncertified=True)
    trace = solve(p, steps, u0 if u0 is not None else p.zeros(), opts)
    residual = optimality_residual(p, steps, trace.final_u)
    logger.info(
        "long_run_reference",
        problem=p.name,
        iterations=trace.iterations,
        stop_reason=trace.stop_reason,
        residual=residual,
    )
    if residual > tol:
        raise ProblemError(
            f"long run on {p.name} stopped at residual {residual:.3e} above {tol:.3e} "
            f"after {trace.iterations} iterations ({trace.stop_reason}); loosen tol or raise max_iter"
        )
    return ReferencePoint(u_bar=trace.final_u, provenance="long-run", residual=residual, tolerance=tol)
