"""Rule selection and the default step policy."""

import math

import numpy as np
import structlog

from src.config.settings import get_settings
from src.core.errors import CertificateRejected, ParameterError, ProblemError
from src.models.certificate import Certificate, Rule
from src.models.run_config import SolverName
from src.models.steps import StepLengths
from src.problems.saddle import SaddleProblem
from src.steprules.certificates import certify

logger = structlog.get_logger(__name__)


def select_rule(p: SaddleProblem, solver: SolverName) -> tuple[Rule, ...]:
    """The certificate rules a run of ``solver`` on ``p`` needs."""
    c = p.constants
    match solver:
        case "modified_pdps":
            return ("modified_k",)
        case "inertial_pdps":
            if not p.bilinear:
                raise ProblemError(f"inertial_pdps needs a bilinear coupling; {p.name} is not")
            return ("bilinear", "inertia_lambda")
    if not p.affine_in_y:
        raise ProblemError(f"{solver} needs K affine in y; use modified_pdps for {p.name}")
    if p.name == "two_block":
        return ("two_block",) if solver == "block_pdps" else ("combined",)
    if solver == "block_pdps" and (p.n_primal > 1 or p.n_dual > 1):
        if c.block_norms is not None:
            return ("block_bilinear",)
        if c.block_lipschitz is not None:
            return ("block_lipschitz",)
    if p.bilinear and c.op_norm is not None:
        return ("bilinear",)
    if c.l_a is not None and c.l_da is not None and c.rho_y is not None:
        return ("affine_y",)
    if c.l_dk is not None:
        return ("lipschitz_k",)
    raise ParameterError(f"{p.name}: no step rule applies to constants {c.to_summary()}")


def certify_run(p: SaddleProblem, solver: SolverName, steps: StepLengths) -> tuple[Certificate, ...]:
    """Evaluate every rule :func:`select_rule` picks."""
    return tuple(certify(rule, steps, p.constants) for rule in select_rule(p, solver))


def _equal_step(a: float, b: float) -> float:
    """Largest ``t`` with ``a t^2 + b t <= 1``."""
    if a == 0 and b == 0:
        raise ParameterError("all coupling constants vanish; no step bound to saturate")
    if a == 0:
        return 1.0 / b
    return (-b + math.sqrt(b * b + 4 * a)) / (2 * a)


def _per_block(sums: np.ndarray, safety: float) -> tuple[float, ...]:
    return tuple(safety / s if s > 0 else 1.0 for s in sums)


def auto_steps(p: SaddleProblem, solver: SolverName) -> StepLengths:
    """Default steps for ``solver`` on ``p``, scaled by the settings' safety factor.

    Raises :class:`CertificateRejected` if the chosen steps do not pass.
    """
    safety = get_settings().step_safety
    c = p.constants
    rules = select_rule(p, solver)
    rule = rules[0]
    match rule:
        case "modified_k":
            if not c.l_dk:
                raise ParameterError(f"{p.name}: modified steps need a positive l_dk")
            steps = StepLengths.single(safety / c.l_dk, safety / (c.l_dk + 4 * math.sqrt(c.l_dky)))
        case "bilinear":
            assert c.op_norm is not None
            if c.op_norm == 0:
                raise ParameterError(f"{p.name}: ||A|| = 0, nothing to bound")
            t = safety / c.op_norm
            lam = None
            if "inertia_lambda" in rules:
                lam = safety / (2 + (c.beta if c.beta is not None else 1.0))
            steps = StepLengths.single(t, t, lam)
        case "combined" | "two_block":
            assert c.l_a is not None and c.l_da is not None and c.op_norm is not None and c.rho_y is not None
            t = safety * _equal_step(c.l_a**2 + c.op_norm**2, c.l_da * c.rho_y / 2)
            steps = StepLengths(tau=(t,), sigma=(t, t)) if rule == "two_block" else StepLengths.single(t, t)
        case "affine_y":
            assert c.l_a is not None and c.l_da is not None and c.rho_y is not None
            t = safety * _equal_step(c.l_a**2, c.l_da * c.rho_y / 2)
            steps = StepLengths.single(t, t)
        case "block_bilinear" | "block_lipschitz":
            matrix = np.asarray(c.block_norms if rule == "block_bilinear" else c.block_lipschitz)
            steps = StepLengths(
                tau=_per_block(matrix.sum(axis=1), safety), sigma=_per_block(matrix.sum(axis=0), safety)
            )
        case "lipschitz_k":
            assert c.l_dk is not None
            t = safety / c.l_dk if c.l_dk > 0 else 1.0
            steps = StepLengths.single(t, t)
        case _:
            raise ParameterError(f"no default steps for rule {rule!r}")
    for cert in certify_run(p, solver, steps):
        if not cert.passed:
            raise CertificateRejected(cert)
    logger.info("auto_steps", problem=p.name, solver=solver, rule=rule, steps=steps.to_summary())
    return steps
