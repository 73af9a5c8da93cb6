"""Proximal operators for the F and G_* building blocks.

Every shipped kind has a closed-form prox. :func:`prox_oracle` is a
brute-force per-entry minimiser used to verify those closed forms.
"""

from collections.abc import Callable
from typing import Literal

import numpy as np
import scipy.optimize
from numpy.typing import ArrayLike

from src.config.settings import get_settings
from src.core.blockvec import BlockVector, FloatArray
from src.core.errors import ParameterError
from src.core.operators import pixel_norms, pointwise_norm

ProxKind = Literal["quadratic_data", "scaled_l1", "ball2", "zero_set", "zero"]

# Relative slack when testing indicator membership of a projected point.
_MEMBERSHIP_RTOL = 1e-12


class ProxFunction:
    """A prox-simple convex function acting on one block.

    Kinds:
        quadratic_data  ½‖w − b‖², strongly convex with γ = 1
        scaled_l1       α‖w‖₁
        ball2           indicator of {w : |w_p| ≤ α for every pixel p}; the
                        components of a pixel run along the leading axis
        zero_set        indicator of {0}
        zero            the zero function

    ``ball_radius`` optionally intersects the function with the per-pixel
    ball of that radius (see :meth:`with_ball`).
    """

    __slots__ = ("kind", "alpha", "b", "ball_radius")

    def __init__(
        self,
        kind: ProxKind,
        *,
        alpha: float = 0.0,
        b: ArrayLike | None = None,
        ball_radius: float | None = None,
    ) -> None:
        if alpha < 0:
            raise ParameterError(f"{kind}: alpha must be nonnegative, got {alpha}")
        if ball_radius is not None and ball_radius <= 0:
            raise ParameterError(f"ball radius must be positive, got {ball_radius}")
        self.kind: ProxKind = kind
        self.alpha = float(alpha)
        self.b: FloatArray | None = None
        if b is not None:
            arr = np.array(b, dtype=np.float64)
            arr.flags.writeable = False
            self.b = arr
        self.ball_radius = ball_radius

    @property
    def gamma(self) -> float:
        """Strong subdifferentiability modulus."""
        return 1.0 if self.kind == "quadratic_data" else 0.0

    def _reference(self, like: FloatArray) -> FloatArray:
        if self.b is None:
            return np.zeros_like(like)
        return np.broadcast_to(self.b, like.shape)

    def value(self, w: ArrayLike) -> float:
        """Function value; indicators return ``inf`` outside their set."""
        arr = np.asarray(w, dtype=np.float64)
        if self.ball_radius is not None:
            if np.any(pixel_norms(arr) > self.ball_radius * (1 + _MEMBERSHIP_RTOL)):
                return float("inf")
        match self.kind:
            case "quadratic_data":
                d = arr - self._reference(arr)
                return 0.5 * float(np.sum(d * d))
            case "scaled_l1":
                return self.alpha * float(np.sum(np.abs(arr)))
            case "ball2":
                norms = pointwise_norm(arr) if arr.ndim > 0 else np.abs(arr)
                return 0.0 if np.all(norms <= self.alpha * (1 + _MEMBERSHIP_RTOL)) else float("inf")
            case "zero_set":
                return 0.0 if not np.any(arr) else float("inf")
            case "zero":
                return 0.0
        raise ParameterError(f"unknown prox kind {self.kind!r}")

    def prox(self, tau: float, x: ArrayLike) -> FloatArray:
        """``argmin_w τ f(w) + ½‖w − x‖²``."""
        if not tau > 0:
            raise ParameterError(f"prox step must be positive, got {tau}")
        arr = np.asarray(x, dtype=np.float64)
        match self.kind:
            case "quadratic_data":
                out = (arr + tau * self._reference(arr)) / (1.0 + tau)
            case "scaled_l1":
                out = np.sign(arr) * np.maximum(np.abs(arr) - tau * self.alpha, 0.0)
            case "ball2":
                if self.alpha == 0:
                    out = np.zeros_like(arr)
                else:
                    norms = pointwise_norm(arr) if arr.ndim > 0 else np.abs(arr)
                    out = arr / np.maximum(1.0, norms / self.alpha)
            case "zero_set":
                out = np.zeros_like(arr)
            case "zero":
                out = arr.copy()
            case _:
                raise ParameterError(f"unknown prox kind {self.kind!r}")
        if self.ball_radius is not None:
            out = out / np.maximum(1.0, pixel_norms(out) / self.ball_radius)
        return out

    def with_ball(self, radius: float) -> "ProxFunction":
        """Add the indicator of ``{w : |w_p| <= radius for every pixel p}``.

        Pixels follow :func:`pixel_norms`. Only kinds that are isotropic per
        pixel qualify: there the prox of the sum is the projection of the
        unconstrained prox.
        """
        if self.kind not in ("zero", "quadratic_data"):
            raise ParameterError(f"cannot add a ball constraint to a {self.kind} function")
        if self.kind == "quadratic_data" and self.b is not None and np.any(self.b):
            raise ParameterError("ball constraint needs a centred quadratic (b = 0)")
        return ProxFunction(self.kind, alpha=self.alpha, b=self.b, ball_radius=radius)

    def __repr__(self) -> str:
        extra = f", ball={self.ball_radius}" if self.ball_radius is not None else ""
        return f"ProxFunction({self.kind}, alpha={self.alpha}{extra})"


def quadratic_data(b: ArrayLike | None = None) -> ProxFunction:
    return ProxFunction("quadratic_data", b=b)


def scaled_l1(alpha: float) -> ProxFunction:
    return ProxFunction("scaled_l1", alpha=alpha)


def ball2(alpha: float) -> ProxFunction:
    return ProxFunction("ball2", alpha=alpha)


def zero_set() -> ProxFunction:
    return ProxFunction("zero_set")


def zero() -> ProxFunction:
    return ProxFunction("zero")


def prox_apply(f: ProxFunction, tau: float, x: BlockVector) -> BlockVector:
    """Apply the prox of ``f`` to every block of ``x``."""
    if not tau > 0:
        raise ParameterError(f"prox step must be positive, got {tau}")
    return x.map_blocks(lambda _, block: f.prox(tau, block))


def prox_oracle(
    f_value: Callable[[float], float],
    tau: float,
    x: BlockVector,
    lo: float,
    hi: float,
    tol: float,
    *,
    grid_points: int | None = None,
) -> BlockVector:
    """Per-entry numerical prox of a separable function.

    Each entry minimises ``w -> τ f(w) + ½(w − x_i)²`` over ``[lo, hi]``: a
    coarse grid locates the best cell (this also handles nonconvex ``f``) and
    a bounded Brent/golden-section search refines it to width ``tol``.
    ``grid_points`` defaults to the ``oracle_grid_points`` setting.
    """
    if not hi > lo:
        raise ParameterError(f"oracle interval must satisfy hi > lo, got [{lo}, {hi}]")
    if not tol > 0:
        raise ParameterError(f"oracle tolerance must be positive, got {tol}")
    if grid_points is None:
        grid_points = get_settings().oracle_grid_points
    grid = np.linspace(lo, hi, max(grid_points, 1000))
    f_grid = np.vectorize(f_value, otypes=[float])(grid)

    def solve_entry(xi: float) -> float:
        objective = tau * f_grid + 0.5 * (grid - xi) ** 2
        i = int(np.argmin(objective))
        left, right = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        res = scipy.optimize.minimize_scalar(
            lambda w: tau * f_value(w) + 0.5 * (w - xi) ** 2,
            bounds=(left, right),
            method="bounded",
            options={"xatol": tol},
        )
        best = float(res.x)
        return best if res.fun <= objective[i] else float(grid[i])

    return x.map_blocks(lambda _, block: np.vectorize(solve_entry, otypes=[float])(block))
