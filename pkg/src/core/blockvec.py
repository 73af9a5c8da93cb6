"""Partitioned dense vectors.

A :class:`BlockVector` carries the primal blocks ``x = (x_1, ..., x_m)`` or the
dual blocks ``y = (y_1, ..., y_n)`` of a saddle-point problem. Each block is a
read-only float64 array with its own shape (an image, a ``2 x n1 x n2``
gradient field, a plain vector); the layout is the tuple of block sizes.

Values are immutable. Every arithmetic operation returns a new vector, so a
vector can be shared between threads and between trace records without
copying.

Reductions are summed strictly left to right (block order, then entry order)
so that monitor traces are bit-reproducible.
"""

from collections.abc import Callable, Iterable, Sequence
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.core.errors import LayoutError, NumericFailure

FloatArray = NDArray[np.float64]


def _sequential_sum(values: FloatArray) -> float:
    """Left-to-right sum; ``np.sum`` uses pairwise summation."""
    if values.size == 0:
        return 0.0
    return float(np.cumsum(values)[-1])


class BlockVector:
    """Immutable partitioned real vector."""

    __slots__ = ("_blocks",)

    def __init__(
        self,
        blocks: Iterable[ArrayLike],
        layout: Sequence[int] | None = None,
        *,
        name: str = "block vector",
    ) -> None:
        arrays: list[FloatArray] = []
        for block in blocks:
            arr = np.array(block, dtype=np.float64, copy=True)
            if arr.ndim == 0:
                arr = arr.reshape(1)
            if not np.all(np.isfinite(arr)):
                raise NumericFailure(name, f"block {len(arrays)} has non-finite entries")
            arr.flags.writeable = False
            arrays.append(arr)
        if layout is not None:
            sizes = tuple(a.size for a in arrays)
            if tuple(int(n) for n in layout) != sizes:
                raise LayoutError(f"{name}: blocks of sizes {sizes} do not match layout {tuple(layout)}")
        self._blocks: tuple[FloatArray, ...] = tuple(arrays)

    @classmethod
    def zeros(cls, shapes: Sequence[tuple[int, ...]]) -> "BlockVector":
        """Zero vector with the given block shapes."""
        return cls(np.zeros(shape) for shape in shapes)

    @classmethod
    def from_flat(cls, flat: ArrayLike, shapes: Sequence[tuple[int, ...]]) -> "BlockVector":
        """Split a flat array into blocks of the given shapes."""
        data = np.asarray(flat, dtype=np.float64).ravel()
        sizes = [int(np.prod(s)) for s in shapes]
        if sum(sizes) != data.size:
            raise LayoutError(f"flat vector of size {data.size} cannot fill shapes {list(shapes)}")
        offsets = np.cumsum([0, *sizes])
        return cls(
            data[offsets[i] : offsets[i + 1]].reshape(shape) for i, shape in enumerate(shapes)
        )

    @property
    def blocks(self) -> tuple[FloatArray, ...]:
        return self._blocks

    @property
    def layout(self) -> tuple[int, ...]:
        return tuple(b.size for b in self._blocks)

    @property
    def shapes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b.shape for b in self._blocks)

    @property
    def size(self) -> int:
        return sum(self.layout)

    def __len__(self) -> int:
        return len(self._blocks)

    def __getitem__(self, index: int) -> FloatArray:
        return self._blocks[index]

    def flat(self) -> FloatArray:
        """Concatenation of all blocks, in block order."""
        if not self._blocks:
            return np.zeros(0)
        return np.concatenate([b.ravel() for b in self._blocks])

    def check_layout(self, other: "BlockVector") -> None:
        if self.layout != other.layout:
            raise LayoutError(f"layout mismatch: {self.layout} vs {other.layout}")

    def map_blocks(self, fn: Callable[[int, FloatArray], ArrayLike]) -> "BlockVector":
        """Apply ``fn(index, block)`` to every block."""
        return BlockVector(fn(i, b) for i, b in enumerate(self._blocks))

    def combine(self, alpha: float, other: "BlockVector", beta: float) -> "BlockVector":
        """Return ``alpha * self + beta * other``."""
        self.check_layout(other)
        return BlockVector(alpha * a + beta * b for a, b in zip(self._blocks, other._blocks))

    def scale_blocks(self, factors: Sequence[float]) -> "BlockVector":
        """Multiply block ``i`` by ``factors[i]``."""
        if len(factors) != len(self._blocks):
            raise LayoutError(f"{len(factors)} factors for {len(self._blocks)} blocks")
        return BlockVector(f * b for f, b in zip(factors, self._blocks))

    def __add__(self, other: "BlockVector") -> "BlockVector":
        self.check_layout(other)
        return BlockVector(a + b for a, b in zip(self._blocks, other._blocks))

    def __sub__(self, other: "BlockVector") -> "BlockVector":
        self.check_layout(other)
        return BlockVector(a - b for a, b in zip(self._blocks, other._blocks))

    def __neg__(self) -> "BlockVector":
        return BlockVector(-b for b in self._blocks)

    def __mul__(self, scalar: float) -> "BlockVector":
        return BlockVector(scalar * b for b in self._blocks)

    __rmul__ = __mul__

    def dot(self, other: "BlockVector") -> float:
        self.check_layout(other)
        return _sequential_sum(self.flat() * other.flat())

    def norm2(self) -> float:
        return float(np.sqrt(self.dot(self)))

    def concat(self, other: "BlockVector") -> "BlockVector":
        """Blocks of ``self`` followed by blocks of ``other``."""
        return BlockVector((*self._blocks, *other._blocks))

    def split(self, n_first: int) -> tuple["BlockVector", "BlockVector"]:
        """Inverse of :meth:`concat`: the first ``n_first`` blocks and the rest."""
        if not 0 <= n_first <= len(self._blocks):
            raise LayoutError(f"cannot split {len(self._blocks)} blocks at {n_first}")
        return BlockVector(self._blocks[:n_first]), BlockVector(self._blocks[n_first:])

    def __repr__(self) -> str:
        return f"BlockVector(shapes={list(self.shapes)})"


class PrimalDual(NamedTuple):
    """A primal-dual point ``u = (x, y)``."""

    x: BlockVector
    y: BlockVector

    def concat(self) -> BlockVector:
        return self.x.concat(self.y)

    @classmethod
    def from_concat(cls, u: BlockVector, n_primal: int) -> "PrimalDual":
        x, y = u.split(n_primal)
        return cls(x, y)

    def combine(self, alpha: float, other: "PrimalDual", beta: float) -> "PrimalDual":
        return PrimalDual(self.x.combine(alpha, other.x, beta), self.y.combine(alpha, other.y, beta))

    def norm2(self) -> float:
        return self.concat().norm2()

    def distance(self, other: "PrimalDual") -> float:
        return (self.concat() - other.concat()).norm2()


def bv_dot(a: BlockVector, b: BlockVector) -> float:
    """Sum of ``a_i * b_i`` over all entries, block order then entry order."""
    return a.dot(b)


def bv_combine(alpha: float, a: BlockVector, beta: float, b: BlockVector) -> BlockVector:
    """Entrywise ``alpha * a + beta * b``."""
    return a.combine(alpha, b, beta)


def norm2(a: BlockVector) -> float:
    """Euclidean norm ``sqrt(bv_dot(a, a))``."""
    return a.norm2()
