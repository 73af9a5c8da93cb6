"""Inertial primal-dual splitting for bilinear couplings."""

from src.core.blockvec import PrimalDual
from src.core.errors import LayoutError, ProblemError
from src.models.solver import IterationTrace, SolverOptions
from src.models.steps import StepLengths
from src.problems.saddle import SaddleProblem, dual_prox_step, primal_prox_step
from src.solvers.base import SaddleSolver


class InertialPDPS(SaddleSolver):
    """PDPS steps taken from the extrapolated point ``u~^k = (1 + lambda_k) u^k - lambda_k u^{k-1}``.

    With ``lambda == 0`` this is plain PDPS up to rounding.
    """

    name = "inertial_pdps"
    # per-step Fejer monotonicity does not hold under inertia
    fejer_monitor = False

    def validate(self, problem: SaddleProblem, steps: StepLengths) -> None:
        if not problem.bilinear:
            raise ProblemError(f"{self.name} needs a bilinear coupling; {problem.name} is not")
        if not steps.is_single:
            raise LayoutError(f"{self.name} takes one tau and one sigma")

    def start(self, u0: PrimalDual) -> None:
        self._tilde = u0

    def step(self, k: int, u: PrimalDual) -> PrimalDual:
        p = self.problem
        xt, yt = self._tilde
        x = primal_prox_step(p, self.taus, xt, p.coupling.grad_x(xt, yt))
        y = dual_prox_step(p, self.sigmas, yt, p.coupling.grad_y(x.combine(2.0, xt, -1.0), yt))
        u_next = PrimalDual(x, y)
        lam = self.steps.lam(k + 1)
        self._tilde = u_next.combine(1.0 + lam, u, -lam)
        return u_next


def solve_inertial_pdps(
    p: SaddleProblem, steps: StepLengths, u0: PrimalDual, opts: SolverOptions | None = None
) -> IterationTrace:
    return InertialPDPS(p, steps, opts).run(u0)
