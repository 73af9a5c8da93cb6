"""Linear operators used by the couplings: dense matrices and the discrete gradient."""

from collections.abc import Callable

import numpy as np
import scipy.linalg

from src.core.blockvec import FloatArray
from src.core.errors import LayoutError, ParameterError


class LinearOperator:
    """A linear map between array spaces together with its adjoint.

    ``norm`` is the exact operator norm when the operator knows it in closed
    form, otherwise ``None`` (use ``estimate_operator_norm``).
    """

    def __init__(
        self,
        apply: Callable[[FloatArray], FloatArray],
        adjoint: Callable[[FloatArray], FloatArray],
        domain_shape: tuple[int, ...],
        range_shape: tuple[int, ...],
        *,
        name: str = "operator",
        norm: float | None = None,
    ) -> None:
        self._apply = apply
        self._adjoint = adjoint
        self.domain_shape = tuple(domain_shape)
        self.range_shape = tuple(range_shape)
        self.name = name
        self.norm = norm

    def __call__(self, x: FloatArray) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        if x.size != int(np.prod(self.domain_shape)):
            raise LayoutError(f"{self.name}: input of size {x.size}, expected {self.domain_shape}")
        return self._apply(x.reshape(self.domain_shape))

    def adjoint(self, y: FloatArray) -> FloatArray:
        y = np.asarray(y, dtype=np.float64)
        if y.size != int(np.prod(self.range_shape)):
            raise LayoutError(f"{self.name}: adjoint input of size {y.size}, expected {self.range_shape}")
        return self._adjoint(y.reshape(self.range_shape))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}: {self.domain_shape} -> {self.range_shape})"


class MatrixOperator(LinearOperator):
    """Dense matrix acting on flattened inputs."""

    def __init__(self, matrix: FloatArray, *, name: str = "matrix") -> None:
        mat = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        self.matrix = mat
        rows, cols = mat.shape
        super().__init__(
            lambda x: mat @ x.ravel(),
            lambda y: mat.T @ y.ravel(),
            (cols,),
            (rows,),
            name=name,
            norm=float(scipy.linalg.svdvals(mat)[0]) if mat.size else 0.0,
        )


def _forward_differences(x: FloatArray) -> FloatArray:
    out = np.zeros((2, *x.shape))
    out[0, :-1, :] = x[1:, :] - x[:-1, :]
    out[1, :, :-1] = x[:, 1:] - x[:, :-1]
    return out


def _forward_differences_adjoint(p: FloatArray) -> FloatArray:
    """Negative divergence, the exact adjoint of the Neumann forward differences."""
    out = np.zeros(p.shape[1:])
    out[:-1, :] -= p[0, :-1, :]
    out[1:, :] += p[0, :-1, :]
    out[:, :-1] -= p[1, :, :-1]
    out[:, 1:] += p[1, :, :-1]
    return out


class GradientOperator(LinearOperator):
    """Discrete gradient ``R^{n1 x n2} -> R^{2 x n1 x n2}``.

    Forward differences with replicate (Neumann) boundary: the difference across
    the last row/column is zero.
    """

    def __init__(self, shape: tuple[int, int]) -> None:
        n1, n2 = shape
        if n1 < 1 or n2 < 1:
            raise ParameterError(f"image shape must be positive, got {shape}")
        # ∇ᵀ∇ is a Kronecker sum of path Laplacians with eigenvalues 4 sin²(πk / 2n).
        top = 4 * np.sin(np.pi * (n1 - 1) / (2 * n1)) ** 2 + 4 * np.sin(np.pi * (n2 - 1) / (2 * n2)) ** 2
        super().__init__(
            _forward_differences,
            _forward_differences_adjoint,
            (n1, n2),
            (2, n1, n2),
            name=f"grad{n1}x{n2}",
            norm=float(np.sqrt(top)),
        )


def pointwise_norm(field: FloatArray) -> FloatArray:
    """Euclidean norm over the leading (component) axis of a vector field."""
    return np.sqrt(np.sum(field * field, axis=0))


def pixel_norms(block: FloatArray) -> FloatArray:
    """Per-pixel norms of a dual block: over the leading axis, or entrywise for vectors."""
    return pointwise_norm(block) if block.ndim > 1 else np.abs(block)
