"""Primal-dual proximal splitting for couplings affine in ``y``."""

from src.core.blockvec import PrimalDual
from src.core.errors import LayoutError, ProblemError
from src.models.solver import IterationTrace, SolverOptions
from src.models.steps import StepLengths
from src.problems.saddle import SaddleProblem, coupling_eval, dual_prox_step, primal_prox_step
from src.solvers.base import SaddleSolver


class PDPS(SaddleSolver):
    """``x+ = prox(x - tau D_xK(x, y))``, ``y+ = prox(y + sigma [2 D_yK(x+, y) - D_yK(x, y)])``."""

    name = "pdps"

    def validate(self, problem: SaddleProblem, steps: StepLengths) -> None:
        if not problem.affine_in_y:
            raise ProblemError(f"{self.name} needs K affine in y; use modified_pdps for {problem.name}")
        if not steps.is_single:
            raise LayoutError(f"{self.name} takes one tau and one sigma; use block_pdps for per-block steps")

    def step(self, k: int, u: PrimalDual) -> PrimalDual:
        p = self.problem
        _, dx, dy_old = coupling_eval(p, u)
        x = primal_prox_step(p, self.taus, u.x, dx)
        dy_new = p.coupling.grad_y(x, u.y)
        y = dual_prox_step(p, self.sigmas, u.y, dy_new.combine(2.0, dy_old, -1.0))
        return PrimalDual(x, y)


class BlockPDPS(PDPS):
    """Same iteration with step ``tau_j`` on primal block ``j`` and ``sigma_l`` on dual block ``l``.

    Blocks are updated in place of one another within a sweep, so with
    uniform steps the iterates equal those of :class:`PDPS` bit for bit.
    """

    name = "block_pdps"

    def validate(self, problem: SaddleProblem, steps: StepLengths) -> None:
        if not problem.affine_in_y:
            raise ProblemError(f"{self.name} needs K affine in y; use modified_pdps for {problem.name}")
        # broadcasting raises LayoutError on a length mismatch
        steps.taus(problem.n_primal)
        steps.sigmas(problem.n_dual)


def solve_pdps(
    p: SaddleProblem, steps: StepLengths, u0: PrimalDual, opts: SolverOptions | None = None
) -> IterationTrace:
    return PDPS(p, steps, opts).run(u0)


def solve_block_pdps(
    p: SaddleProblem, steps: StepLengths, u0: PrimalDual, opts: SolverOptions | None = None
) -> IterationTrace:
    return BlockPDPS(p, steps, opts).run(u0)
