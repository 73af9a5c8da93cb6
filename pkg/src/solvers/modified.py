"""Primal-dual splitting with a corrected dual step for general couplings."""

from src.core.blockvec import PrimalDual
from src.core.errors import LayoutError
from src.models.solver import IterationTrace, SolverOptions
from src.models.steps import StepLengths
from src.problems.saddle import SaddleProblem, coupling_eval, dual_prox_step, primal_prox_step
from src.solvers.base import SaddleSolver


class ModifiedPDPS(SaddleSolver):
    """PDPS whose dual ascent adds ``2 [D_yK(x^k, y^k) - D_yK(x^k, y^{k-1})]``.

    ``y^{-1} = y^0``, so the first step is a PDPS step. For couplings affine
    in ``y`` the correction vanishes identically.
    """

    name = "modified_pdps"

    def validate(self, problem: SaddleProblem, steps: StepLengths) -> None:
        if not steps.is_single:
            raise LayoutError(f"{self.name} takes one tau and one sigma")

    def start(self, u0: PrimalDual) -> None:
        self._y_prev = u0.y

    def step(self, k: int, u: PrimalDual) -> PrimalDual:
        p = self.problem
        _, dx, dy_old = coupling_eval(p, u)
        dy_prev = dy_old if k == 0 else p.coupling.grad_y(u.x, self._y_prev)
        x = primal_prox_step(p, self.taus, u.x, dx)
        dy_new = p.coupling.grad_y(x, u.y)
        ascent = dy_new.combine(2.0, dy_old, -1.0) + (dy_old - dy_prev) * 2.0
        y = dual_prox_step(p, self.sigmas, u.y, ascent)
        self._y_prev = u.y
        return PrimalDual(x, y)


def solve_modified_pdps(
    p: SaddleProblem, steps: StepLengths, u0: PrimalDual, opts: SolverOptions | None = None
) -> IterationTrace:
    return ModifiedPDPS(p, steps, opts).run(u0)
