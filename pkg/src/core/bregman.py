"""Generating functions and their Bregman divergences.

``B_J(z, x) = J(z) - J(x) - <DJ(x), z - x>``. Two generators ship:

- :class:`QuadraticGenerator`: ``J(u) = sum_b (w_b / 2) ||u_b||^2``, the
  standard Hilbert generator with weights ``1/tau_j`` and ``1/sigma_l``.
- :class:`SaddleGenerator`: ``J0 = J_X + J_Y - K`` on the concatenated
  primal-dual vector. Its divergence ``B0`` defines the PDPS.

Other generators (entropic, ...) plug in by subclassing :class:`Generator`
with ``value`` and ``gradient``.
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Protocol

import numpy as np
import structlog

from src.config.settings import get_settings
from src.core.blockvec import BlockVector, PrimalDual
from src.core.errors import LayoutError, NumericFailure, ParameterError
from src.models.diagnostics import CauchyReport, DivergenceValue, ProbeReport, SampleRegion

logger = structlog.get_logger(__name__)


class CouplingCallbacks(Protocol):
    """What a generator needs from a coupling ``K``."""

    def value(self, x: BlockVector, y: BlockVector) -> float: ...

    def grad_x(self, x: BlockVector, y: BlockVector) -> BlockVector: ...

    def grad_y(self, x: BlockVector, y: BlockVector) -> BlockVector: ...


class Generator(ABC):
    """A differentiable generating function on a block layout."""

    kind: str = "generic"

    def __init__(self, shapes: Sequence[tuple[int, ...]]) -> None:
        self.shapes: tuple[tuple[int, ...], ...] = tuple(tuple(s) for s in shapes)

    @property
    def layout(self) -> tuple[int, ...]:
        return tuple(int(np.prod(s)) for s in self.shapes)

    def check(self, u: BlockVector) -> None:
        if u.layout != self.layout:
            raise LayoutError(f"{self.kind} generator expects layout {self.layout}, got {u.layout}")

    @abstractmethod
    def value(self, u: BlockVector) -> float:
        """``J(u)``."""

    @abstractmethod
    def gradient(self, u: BlockVector) -> BlockVector:
        """``DJ(u)``."""

    def divergence(self, z: BlockVector, x: BlockVector) -> float:
        """``B_J(z, x)`` by the defining formula."""
        return self.value(z) - self.value(x) - self.gradient(x).dot(z - x)


class QuadraticGenerator(Generator):
    """``J(u) = sum_b (w_b / 2) ||u_b||^2`` with positive per-block weights."""

    kind = "quadratic"

    def __init__(self, weights: Sequence[float], shapes: Sequence[tuple[int, ...]]) -> None:
        super().__init__(shapes)
        if len(weights) != len(self.shapes):
            raise LayoutError(f"{len(weights)} weights for {len(self.shapes)} blocks")
        if any(not w > 0 for w in weights):
            raise ParameterError(f"generator weights must be positive, got {list(weights)}")
        self.weights = tuple(float(w) for w in weights)

    def value(self, u: BlockVector) -> float:
        self.check(u)
        return sum(0.5 * w * float(np.dot(b.ravel(), b.ravel())) for w, b in zip(self.weights, u))

    def gradient(self, u: BlockVector) -> BlockVector:
        self.check(u)
        return u.scale_blocks(self.weights)

    def divergence(self, z: BlockVector, x: BlockVector) -> float:
        self.check(z)
        d = z - x
        return sum(0.5 * w * float(np.dot(b.ravel(), b.ravel())) for w, b in zip(self.weights, d))


class SaddleGenerator(Generator):
    """``J0(x, y) = J_X(x) + J_Y(y) - K(x, y)`` acting on ``u = x.concat(y)``.

    ``weights`` holds ``1/tau_j`` for the first ``n_primal`` blocks and
    ``1/sigma_l`` for the rest.
    """

    kind = "saddle"

    def __init__(
        self,
        coupling: CouplingCallbacks,
        weights: Sequence[float],
        shapes: Sequence[tuple[int, ...]],
        n_primal: int,
    ) -> None:
        super().__init__(shapes)
        if not 0 < n_primal < len(self.shapes):
            raise LayoutError(f"n_primal={n_primal} does not split {len(self.shapes)} blocks")
        self.quadratic = QuadraticGenerator(weights, shapes)
        self.coupling = coupling
        self.n_primal = n_primal

    @classmethod
    def from_steps(
        cls,
        coupling: CouplingCallbacks,
        tau: Sequence[float],
        sigma: Sequence[float],
        primal_shapes: Sequence[tuple[int, ...]],
        dual_shapes: Sequence[tuple[int, ...]],
    ) -> "SaddleGenerator":
        """Build ``J0`` with weights ``1/tau_j`` and ``1/sigma_l``.

        A single step is broadcast over all blocks on its side.
        """
        tau = list(tau) * len(primal_shapes) if len(tau) == 1 else list(tau)
        sigma = list(sigma) * len(dual_shapes) if len(sigma) == 1 else list(sigma)
        if any(not t > 0 for t in (*tau, *sigma)):
            raise ParameterError("step lengths must be positive")
        weights = [1.0 / t for t in tau] + [1.0 / s for s in sigma]
        return cls(coupling, weights, (*primal_shapes, *dual_shapes), len(primal_shapes))

    def _split(self, u: BlockVector) -> PrimalDual:
        self.check(u)
        return PrimalDual.from_concat(u, self.n_primal)

    def value(self, u: BlockVector) -> float:
        x, y = self._split(u)
        return self.quadratic.value(u) - self.coupling.value(x, y)

    def gradient(self, u: BlockVector) -> BlockVector:
        x, y = self._split(u)
        dk = self.coupling.grad_x(x, y).concat(self.coupling.grad_y(x, y))
        return self.quadratic.gradient(u) - dk

    def divergence(self, z: BlockVector, x: BlockVector) -> float:
        return self.quadratic.divergence(z, x) - coupling_divergence(self.coupling, z, x, self.n_primal)


def coupling_divergence(
    coupling: CouplingCallbacks, u_prime: BlockVector, u: BlockVector, n_primal: int
) -> float:
    """``B_K(u', u) = K(u') - K(u) - <DK(u), u' - u>`` on concatenated vectors."""
    xp, yp = PrimalDual.from_concat(u_prime, n_primal)
    x, y = PrimalDual.from_concat(u, n_primal)
    dk = coupling.grad_x(x, y).concat(coupling.grad_y(x, y))
    return coupling.value(xp, yp) - coupling.value(x, y) - dk.dot(u_prime - u)


def bregman_value(J: Generator, z: BlockVector, x: BlockVector) -> DivergenceValue:
    """``B_J(z, x)`` and its derivative in ``z``, ``DJ(z) - DJ(x)``."""
    J.check(z)
    J.check(x)
    value = J.divergence(z, x)
    if not np.isfinite(value):
        raise NumericFailure(f"{J.kind} divergence", f"value {value}")
    return DivergenceValue(value=value, grad1=J.gradient(z) - J.gradient(x))


def three_point_residual(
    J: Generator, x: BlockVector, z: BlockVector, xbar: BlockVector, *, relative: bool = False
) -> float:
    """Defect of ``<DJ(x) - DJ(z), x - xbar> = B(xbar, x) - B(xbar, z) + B(x, z)``.

    With ``relative=True`` the defect is divided by ``1 + scale`` where
    ``scale`` is the largest absolute term.
    """
    for v in (x, z, xbar):
        J.check(v)
    pairing = (J.gradient(x) - J.gradient(z)).dot(x - xbar)
    terms = (J.divergence(xbar, x), J.divergence(xbar, z), J.divergence(x, z))
    residual = pairing - (terms[0] - terms[1] + terms[2])
    if relative:
        scale = max(abs(pairing), *(abs(t) for t in terms))
        return residual / (1.0 + scale)
    return residual


def _sample_points(region: SampleRegion, dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if region.kind == "box":
        return rng.uniform(region.lower, region.upper, size=(n, dim))
    directions = rng.standard_normal((n, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = region.radius * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / dim)
    return directions * radii


def ellipticity_probe(
    J: Generator, region: SampleRegion, gamma: float, n_samples: int | None = None, seed: int = 0
) -> ProbeReport:
    """Sample pairs ``(z, x)`` in ``region`` and minimise ``B_J(z, x) - (gamma/2)||z - x||^2``.

    A negative minimum is a witness that ``B_J`` is not ``gamma``-elliptic on
    the region. ``n_samples`` defaults to the ``probe_samples`` setting.
    """
    if gamma < 0:
        raise ParameterError(f"gamma must be nonnegative, got {gamma}")
    if n_samples is None:
        n_samples = get_settings().probe_samples
    if n_samples < 1:
        raise ParameterError(f"n_samples must be at least 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    dim = sum(J.layout)
    zs = _sample_points(region, dim, n_samples, rng)
    xs = _sample_points(region, dim, n_samples, rng)

    best = np.inf
    best_pair: tuple[BlockVector, BlockVector] | None = None
    for zf, xf in zip(zs, xs):
        z = BlockVector.from_flat(zf, J.shapes)
        x = BlockVector.from_flat(xf, J.shapes)
        d = zf - xf
        margin = J.divergence(z, x) - 0.5 * gamma * float(np.dot(d, d))
        if margin < best:
            best, best_pair = margin, (z, x)
    assert best_pair is not None
    report = ProbeReport(min_margin=float(best), witness_z=best_pair[0], witness_x=best_pair[1], samples=n_samples)
    logger.debug("ellipticity_probe", kind=J.kind, gamma=gamma, min_margin=report.min_margin)
    return report


def cauchy_bound_check(
    J: Generator,
    x: BlockVector,
    y: BlockVector,
    z: BlockVector,
    alpha: float,
    gamma: float,
    L: float,
) -> CauchyReport:
    """Evaluate ``|<D1 B_J(x, y), z - x>| <= (L/alpha) B_J(x, y) + (alpha/gamma) B_J(z, x)``."""
    for name, v in (("alpha", alpha), ("gamma", gamma), ("L", L)):
        if not v > 0:
            raise ParameterError(f"{name} must be positive, got {v}")
    lhs = abs((J.gradient(x) - J.gradient(y)).dot(z - x))
    rhs = (L / alpha) * J.divergence(x, y) + (alpha / gamma) * J.divergence(z, x)
    return CauchyReport(lhs=lhs, rhs=rhs)
