"""Couplings ``K(x, y)`` with their partial derivatives.

Every coupling acts on primal and dual :class:`BlockVector` values whose
block shapes are fixed at construction.
"""

from abc import ABC, abstractmethod
from collections.abc import Callable, Mapping, Sequence

import numpy as np

from src.core.blockvec import BlockVector, FloatArray
from src.core.errors import LayoutError
from src.core.operators import GradientOperator, LinearOperator

Shapes = tuple[tuple[int, ...], ...]


class Coupling(ABC):
    """``K`` with ``D_x K`` and ``D_y K``."""

    name: str = "coupling"
    affine_in_y: bool = False
    bilinear: bool = False

    def __init__(self, primal_shapes: Sequence[tuple[int, ...]], dual_shapes: Sequence[tuple[int, ...]]) -> None:
        self.primal_shapes: Shapes = tuple(tuple(s) for s in primal_shapes)
        self.dual_shapes: Shapes = tuple(tuple(s) for s in dual_shapes)

    def check(self, x: BlockVector, y: BlockVector) -> None:
        if x.shapes != self.primal_shapes:
            raise LayoutError(f"{self.name}: primal shapes {x.shapes}, expected {self.primal_shapes}")
        if y.shapes != self.dual_shapes:
            raise LayoutError(f"{self.name}: dual shapes {y.shapes}, expected {self.dual_shapes}")

    @abstractmethod
    def value(self, x: BlockVector, y: BlockVector) -> float: ...

    @abstractmethod
    def grad_x(self, x: BlockVector, y: BlockVector) -> BlockVector: ...

    @abstractmethod
    def grad_y(self, x: BlockVector, y: BlockVector) -> BlockVector: ...

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.primal_shapes} x {self.dual_shapes})"


class LinearCoupling(Coupling):
    """``K(x, y) = sum_{j,l} <A_jl x_j, y_l>``.

    ``operators`` maps ``(j, l)`` to the operator from primal block ``j`` to
    dual block ``l``; missing pairs are zero.
    """

    name = "bilinear"
    affine_in_y = True
    bilinear = True

    def __init__(
        self,
        operators: Mapping[tuple[int, int], LinearOperator],
        primal_shapes: Sequence[tuple[int, ...]],
        dual_shapes: Sequence[tuple[int, ...]],
    ) -> None:
        super().__init__(primal_shapes, dual_shapes)
        for (j, l), op in operators.items():
            if not (0 <= j < len(self.primal_shapes) and 0 <= l < len(self.dual_shapes)):
                raise LayoutError(f"operator index ({j}, {l}) outside the block structure")
            if int(np.prod(op.domain_shape)) != int(np.prod(self.primal_shapes[j])):
                raise LayoutError(f"operator ({j}, {l}) domain {op.domain_shape} != block {self.primal_shapes[j]}")
            if int(np.prod(op.range_shape)) != int(np.prod(self.dual_shapes[l])):
                raise LayoutError(f"operator ({j}, {l}) range {op.range_shape} != block {self.dual_shapes[l]}")
        self.operators = dict(operators)

    def apply(self, x: BlockVector) -> BlockVector:
        """``(A x)_l = sum_j A_jl x_j``."""
        out = [np.zeros(shape) for shape in self.dual_shapes]
        for (j, l), op in self.operators.items():
            out[l] = out[l] + op(x[j]).reshape(self.dual_shapes[l])
        return BlockVector(out, name=f"{self.name}.apply")

    def adjoint(self, y: BlockVector) -> BlockVector:
        """``(A^* y)_j = sum_l A_jl^* y_l``."""
        out = [np.zeros(shape) for shape in self.primal_shapes]
        for (j, l), op in self.operators.items():
            out[j] = out[j] + op.adjoint(y[l]).reshape(self.primal_shapes[j])
        return BlockVector(out, name=f"{self.name}.adjoint")

    def value(self, x: BlockVector, y: BlockVector) -> float:
        self.check(x, y)
        return self.apply(x).dot(y)

    def grad_x(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        return self.adjoint(y)

    def grad_y(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        return self.apply(x)


class TwoBlockCoupling(Coupling):
    """``K(x, (y1, y2)) = <A1(x), y1> + <grad x, y2>`` with ``A1(x) = x^2 / 2`` pointwise.

    ``y1`` is stored as a one-component field of shape ``(1, n1, n2)``.
    """

    name = "two_block"
    affine_in_y = True

    def __init__(self, grad: GradientOperator) -> None:
        shape = grad.domain_shape
        super().__init__((shape,), ((1, *shape), grad.range_shape))
        self.grad = grad

    @staticmethod
    def a1(x: FloatArray) -> FloatArray:
        return 0.5 * x * x

    def value(self, x: BlockVector, y: BlockVector) -> float:
        self.check(x, y)
        image = x[0]
        return float(np.sum(self.a1(image) * y[0][0])) + float(np.sum(self.grad(image) * y[1]))

    def grad_x(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        image = x[0]
        return BlockVector([image * y[0][0] + self.grad.adjoint(y[1])], name=f"{self.name}.grad_x")

    def grad_y(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        image = x[0]
        return BlockVector([self.a1(image)[np.newaxis], self.grad(image)], name=f"{self.name}.grad_y")


def rho(t: FloatArray | float) -> FloatArray | float:
    """``rho(t) = 2t - t^2``; ``sup_s rho(s t)`` is the zero-function ``|t|_0``."""
    return 2 * t - t * t


class PottsCoupling(Coupling):
    """``K(x, y) = alpha * sum_p rho(<[grad x]_p, y_p>)``, concave but not affine in ``y``."""

    name = "potts"
    affine_in_y = False

    def __init__(self, grad: GradientOperator, alpha: float = 1.0) -> None:
        super().__init__((grad.domain_shape,), (grad.range_shape,))
        self.grad = grad
        self.alpha = float(alpha)

    def _pairing(self, x: BlockVector, y: BlockVector) -> tuple[FloatArray, FloatArray]:
        g = self.grad(x[0])
        return g, np.sum(g * y[0], axis=0)

    def value(self, x: BlockVector, y: BlockVector) -> float:
        self.check(x, y)
        _, t = self._pairing(x, y)
        return self.alpha * float(np.sum(rho(t)))

    def grad_x(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        _, t = self._pairing(x, y)
        weight = self.alpha * (2.0 - 2.0 * t)
        return BlockVector([self.grad.adjoint(weight[np.newaxis] * y[0])], name=f"{self.name}.grad_x")

    def grad_y(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        g, t = self._pairing(x, y)
        weight = self.alpha * (2.0 - 2.0 * t)
        return BlockVector([weight[np.newaxis] * g], name=f"{self.name}.grad_y")


class PrimalOnlyCoupling(Coupling):
    """``K(x, y) = E(x)``: the forward-backward reduction."""

    name = "primal_only"
    affine_in_y = True

    def __init__(
        self,
        energy: Callable[[FloatArray], float],
        gradient: Callable[[FloatArray], FloatArray],
        primal_shape: tuple[int, ...],
        dual_shape: tuple[int, ...] = (1,),
    ) -> None:
        super().__init__((primal_shape,), (dual_shape,))
        self.energy = energy
        self.gradient = gradient

    def value(self, x: BlockVector, y: BlockVector) -> float:
        self.check(x, y)
        return float(self.energy(x[0]))

    def grad_x(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        return BlockVector([np.reshape(self.gradient(x[0]), x[0].shape)], name=f"{self.name}.grad_x")

    def grad_y(self, x: BlockVector, y: BlockVector) -> BlockVector:
        self.check(x, y)
        return BlockVector.zeros(self.dual_shapes)
