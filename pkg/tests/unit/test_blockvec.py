"""Block vector unit tests."""

import numpy as np
import pytest

from src.core.blockvec import BlockVector, PrimalDual, bv_combine, bv_dot, norm2
from src.core.errors import LayoutError, NumericFailure


def test_dot_and_norm_over_blocks():
    a = BlockVector([[1.0, 2.0], [[3.0]]])
    b = BlockVector([[4.0, 5.0], [[6.0]]])

    assert a.layout == (2, 1)
    assert bv_dot(a, b) == 32.0
    assert norm2(BlockVector([[3.0], [4.0]])) == 5.0


def test_combine_is_entrywise_affine():
    a = BlockVector([np.ones(3)])
    b = BlockVector([np.arange(3.0)])

    out = bv_combine(2.0, a, -1.0, b)

    np.testing.assert_array_equal(out[0], [2.0, 1.0, 0.0])


def test_layout_mismatch_raises():
    with pytest.raises(LayoutError):
        BlockVector([np.ones(2)]).dot(BlockVector([np.ones(3)]))
    with pytest.raises(LayoutError):
        BlockVector([np.ones(2)], layout=(3,))


def test_non_finite_blocks_are_numeric_failures():
    with pytest.raises(NumericFailure, match="iterate"):
        BlockVector([[1.0, np.nan]], name="primal iterate")


def test_blocks_are_read_only_copies():
    source = np.zeros(3)
    v = BlockVector([source])
    source[0] = 5.0

    assert v[0][0] == 0.0
    with pytest.raises(ValueError):
        v[0][1] = 1.0


def test_from_flat_and_split_invert_concat():
    shapes = [(2, 2), (3,)]
    v = BlockVector.from_flat(np.arange(7.0), shapes)
    x, y = v.split(1)

    assert v.shapes == ((2, 2), (3,))
    np.testing.assert_array_equal(x.concat(y).flat(), np.arange(7.0))
    with pytest.raises(LayoutError):
        BlockVector.from_flat(np.arange(6.0), shapes)


def test_sequential_sum_is_left_to_right():
    ones = BlockVector([np.ones(5)])
    large_first = BlockVector([[1.0, 1e-16, 1e-16, 1e-16, 1e-16]])
    small_first = BlockVector([[1e-16, 1e-16, 1e-16, 1e-16, 1.0]])

    assert large_first.dot(ones) == 1.0
    assert small_first.dot(ones) > 1.0


def test_primal_dual_distance():
    u = PrimalDual(BlockVector([[0.0]]), BlockVector([[0.0]]))
    w = PrimalDual(BlockVector([[3.0]]), BlockVector([[4.0]]))

    assert u.distance(w) == 5.0
    assert PrimalDual.from_concat(w.concat(), 1).y[0][0] == 4.0
