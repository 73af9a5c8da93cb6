"""Gap functionals and second-order growth gaps."""

import math
from collections.abc import Mapping, Sequence
from typing import Any, Literal

import numpy as np
import structlog

from src.core.blockvec import BlockVector, PrimalDual
from src.core.errors import ParameterError, ProblemError
from src.core.operators import pixel_norms, pointwise_norm
from src.models.diagnostics import GrowthGap
from src.models.problem import ReferencePoint
from src.problems.saddle import SaddleProblem

logger = structlog.get_logger(__name__)

GrowthMode = Literal["convex_concave", "lipschitz_k", "affine_y_a", "affine_y_b"]
GROWTH_MODES: tuple[GrowthMode, ...] = ("convex_concave", "lipschitz_k", "affine_y_a", "affine_y_b")

# Slack of the pointwise growth check.
POINTWISE_ATOL = 1e-10


def lagrangian_gap(p: SaddleProblem, u: PrimalDual, ubar: PrimalDual) -> float:
    """``L(x, ybar) - L(xbar, y)``; infinite when an indicator is violated."""
    p.check_point(u)
    p.check_point(ubar)
    left = p.f_value(u.x) + p.coupling.value(u.x, ubar.y) - p.gstar_value(ubar.y)
    right = p.f_value(ubar.x) + p.coupling.value(ubar.x, u.y) - p.gstar_value(u.y)
    return left - right


def partial_gap(p: SaddleProblem, u: PrimalDual, references: Sequence[PrimalDual | ReferencePoint]) -> float:
    """Largest Lagrangian gap of ``u`` against finitely many reference points."""
    if not references:
        raise ParameterError("partial_gap needs at least one reference point")
    points = [r.u_bar if isinstance(r, ReferencePoint) else r for r in references]
    return max(lagrangian_gap(p, u, ubar) for ubar in points)


def coupling_ak(p: SaddleProblem, u: PrimalDual, ubar: PrimalDual) -> float:
    """``a_K(u, ubar) = K(u) - K(ubar) + <D_x K(u), xbar - x> + <D_y K(ubar), ybar - y>``."""
    p.check_point(u)
    p.check_point(ubar)
    k = p.coupling
    return (
        k.value(u.x, u.y)
        - k.value(ubar.x, ubar.y)
        + k.grad_x(u.x, u.y).dot(ubar.x - u.x)
        + k.grad_y(ubar.x, ubar.y).dot(ubar.y - u.y)
    )


def _sq(v: BlockVector) -> float:
    return v.dot(v)


def _max_pixel_norm(y: BlockVector) -> float:
    return max((float(np.max(pixel_norms(b))) for b in y if b.size), default=0.0)


def growth_gap(
    p: SaddleProblem,
    u: PrimalDual,
    ubar: PrimalDual,
    mode: GrowthMode,
    constants: Mapping[str, Any] | None = None,
) -> GrowthGap:
    """Evaluate ``G(u, ubar) = (gamma_F - g_F) |x - xbar|^2 + (gamma_G - g_G) |y - ybar|^2``.

    The mode fixes the subtracted moduli ``g_F``, ``g_G``:

    - ``convex_concave``: both zero.
    - ``lipschitz_k``: both ``L_DK``; nonnegative when ``gamma_F, gamma_G >= L_DK``.
    - ``affine_y_a``: ``g_F = tilde_gamma_f`` (default ``L_DA (rho_y + |ybar|) / 2``),
      ``g_G = tilde_gamma_g`` (default 0). Valid when ``g_F`` reaches that threshold.
    - ``affine_y_b``: ``g_F = tilde_gamma_f``, required ``> L_DA (|ybar| + alpha / 2)``;
      ``g_G = tilde_gamma_g`` (default ``L_DA rho_x^2 / (2 alpha)``).

    ``|ybar|`` is the largest pixel norm of ``ybar`` and ``rho_y`` a pixelwise
    bound, matching pointwise operators ``A``. ``gamma_f``/``gamma_g``
    default to the problem's moduli, the Lipschitz constants to the
    problem's :class:`CouplingConstants`.
    """
    c = dict(constants or {})
    meta = p.constants
    gamma_f = float(c.get("gamma_f", p.gamma_f))
    gamma_g = float(c.get("gamma_g", p.gamma_g))

    def need(key: str, fallback: float | None = None) -> float:
        value = c.get(key, fallback)
        if value is None:
            raise ParameterError(f"growth mode '{mode}' needs constant {key}")
        return float(value)

    conditions = True
    match mode:
        case "convex_concave":
            g_f = g_g = 0.0
        case "lipschitz_k":
            g_f = g_g = need("l_dk", meta.l_dk)
        case "affine_y_a":
            l_da, rho_y = need("l_da", meta.l_da), need("rho_y", meta.rho_y)
            threshold = l_da / 2 * (rho_y + _max_pixel_norm(ubar.y))
            g_f = float(c.get("tilde_gamma_f", threshold))
            g_g = float(c.get("tilde_gamma_g", 0.0))
            conditions = g_f >= threshold and g_g >= 0
        case "affine_y_b":
            l_da, alpha, rho_x = need("l_da", meta.l_da), need("alpha"), need("rho_x")
            if not alpha > 0:
                raise ParameterError(f"growth mode 'affine_y_b' needs alpha > 0, got {alpha}")
            f_threshold = l_da * (_max_pixel_norm(ubar.y) + alpha / 2)
            g_threshold = l_da * rho_x**2 / (2 * alpha)
            g_f = need("tilde_gamma_f", f_threshold)
            g_g = float(c.get("tilde_gamma_g", g_threshold))
            conditions = g_f > f_threshold and g_g >= g_threshold
        case _:
            raise ParameterError(f"unknown growth mode {mode!r}; expected one of {', '.join(GROWTH_MODES)}")

    x_coef, y_coef = gamma_f - g_f, gamma_g - g_g
    dx, dy = _sq(u.x - ubar.x), _sq(u.y - ubar.y)
    value = x_coef * dx + y_coef * dy
    symmetric = coupling_ak(p, ubar, u) + coupling_ak(p, u, ubar)
    pointwise = gamma_f * dx + gamma_g * dy >= symmetric + value - POINTWISE_ATOL * (1 + abs(symmetric))
    return GrowthGap(
        mode=mode,
        value=value,
        x_coefficient=x_coef,
        y_coefficient=y_coef,
        nonneg_guaranteed=bool(conditions and x_coef >= 0 and y_coef >= 0),
        pointwise_holds=bool(pointwise),
    )


def growth_value(p: SaddleProblem, u: PrimalDual, ubar: PrimalDual) -> float:
    """``gamma_F |x - xbar|^2 + gamma_G |y - ybar|^2`` (the convex-concave gap)."""
    return p.gamma_f * _sq(u.x - ubar.x) + p.gamma_g * _sq(u.y - ubar.y)


def block_growth_norm(u: PrimalDual, ubar: PrimalDual, coefficients: Sequence[float]) -> float:
    """``|P(u - ubar)|`` where ``P`` scales block ``b`` of ``x.concat(y)`` by ``sqrt(max(c_b, 0))``."""
    d = u.concat() - ubar.concat()
    if len(coefficients) != len(d):
        raise ParameterError(f"{len(coefficients)} coefficients for {len(d)} blocks")
    return d.scale_blocks([math.sqrt(max(c, 0.0)) for c in coefficients]).norm2()


def duality_gap_rof(
    p: SaddleProblem, u: PrimalDual, b: np.ndarray | None = None, alpha: float | None = None
) -> float:
    """ROF primal minus dual value.

    Primal ``½|x - b|^2 + alpha sum_p |[grad x]_p|``; dual
    ``<grad^T y, b> - ½|grad^T y|^2`` on ``{|y_p| <= alpha}``, ``-inf`` outside.
    """
    if p.name != "rof":
        raise ProblemError(f"duality_gap_rof needs the rof problem, got {p.name!r}")
    p.check_point(u)
    grad = p.data["grad"]
    b = p.data["b"] if b is None else np.asarray(b, dtype=np.float64)
    alpha = p.data["alpha"] if alpha is None else float(alpha)
    x, y = u.x[0], u.y[0]
    primal = 0.5 * float(np.sum((x - b) ** 2)) + alpha * float(np.sum(pointwise_norm(grad(x))))
    if np.any(pointwise_norm(y) > alpha * (1 + 1e-12)):
        return math.inf
    div = grad.adjoint(y)
    dual = float(np.sum(div * b)) - 0.5 * float(np.sum(div * div))
    return primal - dual
