"""Synthetic test images and exact ROF instances."""

from typing import NamedTuple

import numpy as np

from src.core.blockvec import FloatArray
from src.core.errors import ParameterError
from src.core.operators import GradientOperator, pointwise_norm


def _check_shape(shape: tuple[int, int]) -> None:
    if len(shape) != 2 or min(shape) < 2:
        raise ParameterError(f"phantoms need a 2-d shape of at least 2x2, got {shape}")


def two_region(shape: tuple[int, int], low: float = 0.0, high: float = 1.0) -> FloatArray:
    """Left half ``low``, right half ``high`` (a vertical edge)."""
    _check_shape(shape)
    image = np.full(shape, low, dtype=np.float64)
    image[:, shape[1] // 2 :] = high
    return image


def centred_square(shape: tuple[int, int], low: float = 0.0, high: float = 1.0, fraction: float = 0.5) -> FloatArray:
    """A ``high`` square covering ``fraction`` of each side, centred on a ``low`` background."""
    _check_shape(shape)
    if not 0 < fraction < 1:
        raise ParameterError(f"fraction must lie in (0, 1), got {fraction}")
    image = np.full(shape, low, dtype=np.float64)
    n1, n2 = shape
    h1, h2 = max(1, round(n1 * fraction)), max(1, round(n2 * fraction))
    r0, c0 = (n1 - h1) // 2, (n2 - h2) // 2
    image[r0 : r0 + h1, c0 : c0 + h2] = high
    return image


def phantom(kind: str, size: int) -> FloatArray:
    match kind:
        case "two_region":
            return two_region((size, size))
        case "square":
            return centred_square((size, size))
    raise ParameterError(f"unknown phantom {kind!r}; expected two_region or square")


def add_noise(image: FloatArray, sigma: float, seed: int) -> FloatArray:
    """Seeded Gaussian noise of standard deviation ``sigma``, clamped to ``[0, 1]``."""
    if sigma < 0:
        raise ParameterError(f"noise level must be nonnegative, got {sigma}")
    rng = np.random.default_rng(seed)
    return np.clip(image + sigma * rng.standard_normal(image.shape), 0.0, 1.0)


class RofInstance(NamedTuple):
    b: FloatArray
    x_bar: FloatArray
    y_bar: FloatArray
    alpha: float


def analytic_rof_instance(
    shape: tuple[int, int], alpha: float, low: float = 0.0, high: float = 1.0
) -> RofInstance:
    """An ROF problem whose saddle point is known exactly.

    ``x_bar`` is the two-region image. ``y_bar`` equals ``alpha`` times the unit
    jump direction on the edge pixels and zero elsewhere, so ``grad x_bar`` lies
    in the normal cone of the dual ball at ``y_bar``. The data is then
    ``b = x_bar + grad^T y_bar``.
    """
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if high == low:
        raise ParameterError("the two regions must differ")
    grad = GradientOperator(shape)
    x_bar = two_region(shape, low, high)
    g = grad(x_bar)
    norms = pointwise_norm(g)
    jump = norms > 0
    y_bar = np.zeros_like(g)
    y_bar[:, jump] = alpha * g[:, jump] / norms[jump]
    b = x_bar + grad.adjoint(y_bar)
    return RofInstance(b=b, x_bar=x_bar, y_bar=y_bar, alpha=float(alpha))
