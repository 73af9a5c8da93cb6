"""Linear operator and operator-norm unit tests."""

import numpy as np
import pytest

from src.core.errors import LayoutError, ParameterError
from src.core.operators import GradientOperator, MatrixOperator, pixel_norms
from src.steprules.operator_norm import estimate_operator_norm, operator_norm


def test_gradient_adjoint_pair(rng):
    grad = GradientOperator((7, 5))
    x = rng.standard_normal((7, 5))
    p = rng.standard_normal((2, 7, 5))

    lhs = float(np.vdot(grad(x), p))
    rhs = float(np.vdot(x, grad.adjoint(p)))

    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_gradient_neumann_boundary():
    x = np.arange(6.0).reshape(2, 3)

    g = GradientOperator((2, 3))(x)

    np.testing.assert_array_equal(g[0, -1, :], 0.0)
    np.testing.assert_array_equal(g[1, :, -1], 0.0)
    np.testing.assert_array_equal(g[1, :, :-1], 1.0)
    assert not np.any(GradientOperator((4, 4))(np.full((4, 4), 2.5)))


def test_gradient_closed_form_norm():
    assert GradientOperator((8, 8)).norm ** 2 == pytest.approx(7.695, abs=1e-3)
    assert GradientOperator((16, 16)).norm <= np.sqrt(8.0)


def test_matrix_operator_norm_and_layout():
    op = MatrixOperator([[3.0, 0.0], [0.0, 4.0], [0.0, 0.0]])

    assert op.norm == pytest.approx(4.0)
    assert op.range_shape == (3,)
    with pytest.raises(LayoutError):
        op(np.ones(3))


def test_power_iteration_identity():
    identity = lambda x: x  # noqa: E731

    assert estimate_operator_norm(identity, identity, (5,), iters=10) == pytest.approx(1.0)


def test_power_iteration_diagonal():
    d = np.array([2.0, 1.0])

    estimate = estimate_operator_norm(lambda x: d * x, lambda y: d * y, (2,), iters=100)

    assert estimate == pytest.approx(2.0, rel=1e-10)


def test_power_iteration_on_gradient_is_a_lower_bound():
    grad = GradientOperator((16, 16))

    estimate = estimate_operator_norm(grad, grad.adjoint, grad.domain_shape, iters=200)

    assert estimate <= np.sqrt(8.0)
    assert estimate <= grad.norm * (1 + 1e-10)
    assert estimate >= 0.85 * grad.norm


def test_power_iteration_rejects_a_wrong_adjoint():
    with pytest.raises(ParameterError, match="adjoint"):
        estimate_operator_norm(lambda x: 2.0 * x, lambda y: y, (3,), iters=5)


def test_power_iteration_of_zero_operator():
    zero = lambda x: np.zeros_like(x)  # noqa: E731

    assert estimate_operator_norm(zero, zero, (3,), iters=5) == 0.0


def test_operator_norm_prefers_closed_form():
    op = MatrixOperator([[2.0, 0.0], [0.0, 1.0]])

    assert operator_norm(op) == op.norm


def test_pixel_norms():
    np.testing.assert_allclose(pixel_norms(np.array([-3.0, 4.0])), [3.0, 4.0])
    np.testing.assert_allclose(pixel_norms(np.array([[3.0], [4.0]])), [5.0])
