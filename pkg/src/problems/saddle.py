"""The saddle-point problem ``min_x max_y F(x) + K(x, y) - G_*(y)``.

``F`` and ``G_*`` are separable over blocks, one :class:`ProxFunction` per
block. The coupling carries ``K`` and its derivatives; the constants carry the
Lipschitz metadata the step rules need.
"""

from collections.abc import Sequence
from typing import Any, NamedTuple

import numpy as np
import structlog

from src.core.blockvec import BlockVector, PrimalDual
from src.core.bregman import SaddleGenerator
from src.core.errors import LayoutError, NumericFailure, ParameterError
from src.core.prox import ProxFunction
from src.models.problem import CouplingConstants, Region
from src.models.steps import StepLengths
from src.problems.couplings import Coupling

logger = structlog.get_logger(__name__)


class CouplingEval(NamedTuple):
    value: float
    dx: BlockVector
    dy: BlockVector


class SaddleProblem:
    """Immutable bundle of ``F``-blocks, ``G_*``-blocks, the coupling and its constants."""

    def __init__(
        self,
        name: str,
        f_blocks: Sequence[ProxFunction],
        gstar_blocks: Sequence[ProxFunction],
        coupling: Coupling,
        constants: CouplingConstants,
        *,
        region: Region | None = None,
        data: dict[str, Any] | None = None,
    ) -> None:
        if len(f_blocks) != len(coupling.primal_shapes):
            raise LayoutError(f"{name}: {len(f_blocks)} F-blocks for {len(coupling.primal_shapes)} primal blocks")
        if len(gstar_blocks) != len(coupling.dual_shapes):
            raise LayoutError(f"{name}: {len(gstar_blocks)} G*-blocks for {len(coupling.dual_shapes)} dual blocks")
        if constants.affine_in_y != coupling.affine_in_y:
            raise ParameterError(f"{name}: constants disagree with the coupling on affine_in_y")
        self.name = name
        self.f_blocks = tuple(f_blocks)
        self.gstar_blocks = tuple(gstar_blocks)
        self.coupling = coupling
        self.constants = constants
        self.region = region
        self.data: dict[str, Any] = dict(data or {})

    @property
    def primal_shapes(self) -> tuple[tuple[int, ...], ...]:
        return self.coupling.primal_shapes

    @property
    def dual_shapes(self) -> tuple[tuple[int, ...], ...]:
        return self.coupling.dual_shapes

    @property
    def n_primal(self) -> int:
        return len(self.primal_shapes)

    @property
    def n_dual(self) -> int:
        return len(self.dual_shapes)

    @property
    def affine_in_y(self) -> bool:
        return self.coupling.affine_in_y

    @property
    def bilinear(self) -> bool:
        return self.coupling.bilinear

    @property
    def gamma_f(self) -> float:
        """Common strong-convexity modulus of the ``F``-blocks."""
        return min(f.gamma for f in self.f_blocks)

    @property
    def gamma_g(self) -> float:
        """Common strong-convexity modulus of the ``G_*``-blocks."""
        return min(g.gamma for g in self.gstar_blocks)

    def zeros(self) -> PrimalDual:
        return PrimalDual(BlockVector.zeros(self.primal_shapes), BlockVector.zeros(self.dual_shapes))

    def point(self, x_blocks: Sequence[Any], y_blocks: Sequence[Any]) -> PrimalDual:
        """Build a primal-dual point, reshaping each block to the problem layout."""
        x = BlockVector(np.reshape(b, s) for b, s in zip(x_blocks, self.primal_shapes, strict=True))
        y = BlockVector(np.reshape(b, s) for b, s in zip(y_blocks, self.dual_shapes, strict=True))
        return PrimalDual(x, y)

    def check_point(self, u: PrimalDual) -> None:
        if u.x.shapes != self.primal_shapes or u.y.shapes != self.dual_shapes:
            raise LayoutError(
                f"{self.name}: point shapes {u.x.shapes}/{u.y.shapes} do not match "
                f"{self.primal_shapes}/{self.dual_shapes}"
            )

    def f_value(self, x: BlockVector) -> float:
        return sum(f.value(b) for f, b in zip(self.f_blocks, x))

    def gstar_value(self, y: BlockVector) -> float:
        return sum(g.value(b) for g, b in zip(self.gstar_blocks, y))

    def lagrangian(self, u: PrimalDual) -> float:
        """``F(x) + K(x, y) - G_*(y)``; infinite outside the indicator sets."""
        return self.f_value(u.x) + self.coupling.value(u.x, u.y) - self.gstar_value(u.y)

    def generator(self, steps: StepLengths) -> SaddleGenerator:
        """``J0`` with weights ``1/tau_j``, ``1/sigma_l``."""
        return SaddleGenerator.from_steps(
            self.coupling,
            steps.taus(self.n_primal),
            steps.sigmas(self.n_dual),
            self.primal_shapes,
            self.dual_shapes,
        )

    def b0(self, steps: StepLengths, z: PrimalDual, u: PrimalDual) -> float:
        """``B0(z, u)`` for the given steps."""
        return self.generator(steps).divergence(z.concat(), u.concat())

    def with_dual_ball(self, radius: float) -> "SaddleProblem":
        """Add the per-pixel dual ball of ``radius`` to every ``G_*``-block."""
        return SaddleProblem(
            self.name,
            self.f_blocks,
            [g.with_ball(radius) for g in self.gstar_blocks],
            self.coupling,
            self.constants,
            region=self.region,
            data=self.data,
        )

    def __repr__(self) -> str:
        return f"SaddleProblem({self.name}, {self.constants.to_summary()})"


def coupling_eval(p: SaddleProblem, u: PrimalDual) -> CouplingEval:
    """``K(u)``, ``D_x K(u)``, ``D_y K(u)``.

    Points outside the declared region are logged, not rejected.
    """
    p.check_point(u)
    if p.region is not None and not p.region.contains(u):
        logger.debug("coupling_eval_outside_region", problem=p.name)
    name = p.coupling.name
    value = p.coupling.value(u.x, u.y)
    if not np.isfinite(value):
        raise NumericFailure(f"{name}.value", f"K = {value}")
    try:
        dx = p.coupling.grad_x(u.x, u.y)
    except NumericFailure as exc:
        raise NumericFailure(f"{name}.grad_x") from exc
    try:
        dy = p.coupling.grad_y(u.x, u.y)
    except NumericFailure as exc:
        raise NumericFailure(f"{name}.grad_y") from exc
    return CouplingEval(value, dx, dy)


def primal_prox_step(p: SaddleProblem, taus: Sequence[float], x: BlockVector, dx: BlockVector) -> BlockVector:
    """``x_j <- prox_{tau_j F_j}(x_j - tau_j dx_j)`` for every primal block."""
    return BlockVector(
        (f.prox(t, xb - t * db) for f, t, xb, db in zip(p.f_blocks, taus, x, dx, strict=True)),
        name="primal iterate",
    )


def dual_prox_step(p: SaddleProblem, sigmas: Sequence[float], y: BlockVector, ascent: BlockVector) -> BlockVector:
    """``y_l <- prox_{sigma_l G_l*}(y_l + sigma_l ascent_l)`` for every dual block."""
    return BlockVector(
        (g.prox(s, yb + s * ab) for g, s, yb, ab in zip(p.gstar_blocks, sigmas, y, ascent, strict=True)),
        name="dual iterate",
    )


def fixed_point_map(p: SaddleProblem, steps: StepLengths, u: PrimalDual) -> PrimalDual:
    """One PDPS step from ``u`` with both extrapolation points at ``u``."""
    _, dx, dy = coupling_eval(p, u)
    x_new = primal_prox_step(p, steps.taus(p.n_primal), u.x, dx)
    y_new = dual_prox_step(p, steps.sigmas(p.n_dual), u.y, dy)
    return PrimalDual(x_new, y_new)


def optimality_residual(p: SaddleProblem, steps: StepLengths, u: PrimalDual) -> float:
    """``||u - T(u)||``; zero exactly at points satisfying the first-order conditions."""
    return u.distance(fixed_point_map(p, steps, u))
