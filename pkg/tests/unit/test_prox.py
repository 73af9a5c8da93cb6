"""Proximal operator unit tests."""

import numpy as np
import pytest

from src.core.blockvec import BlockVector
from src.core.errors import ParameterError
from src.core.prox import ball2, prox_apply, prox_oracle, quadratic_data, scaled_l1, zero, zero_set


def test_soft_threshold():
    np.testing.assert_allclose(scaled_l1(1.0).prox(1.0, [3.0, 0.5]), [2.0, 0.0])
    np.testing.assert_allclose(scaled_l1(1.0).prox(1.0, [-3.0, -0.5]), [-2.0, 0.0])


def test_ball_projection():
    np.testing.assert_allclose(ball2(1.0).prox(1.0, [3.0, 4.0]), [0.6, 0.8])


def test_ball_is_per_pixel_on_fields():
    field = np.zeros((2, 1, 2))
    field[:, 0, 0] = [3.0, 4.0]
    field[:, 0, 1] = [0.3, 0.4]

    out = ball2(1.0).prox(0.7, field)

    np.testing.assert_allclose(out[:, 0, 0], [0.6, 0.8])
    np.testing.assert_allclose(out[:, 0, 1], [0.3, 0.4])


def test_quadratic_data_prox():
    assert quadratic_data(0.0).prox(1.0, 2.0) == pytest.approx(1.0)
    np.testing.assert_allclose(quadratic_data([1.0, -1.0]).prox(3.0, [0.0, 0.0]), [0.75, -0.75])
    assert quadratic_data().gamma == 1.0
    assert scaled_l1(1.0).gamma == 0.0


def test_indicator_values():
    assert zero_set().value([0.0, 0.0]) == 0.0
    assert zero_set().value([0.0, 1e-3]) == float("inf")
    assert ball2(1.0).value([0.6, 0.8]) == 0.0
    assert ball2(1.0).value([0.6, 0.9]) == float("inf")
    np.testing.assert_array_equal(zero_set().prox(1.0, [1.0, 2.0]), [0.0, 0.0])
    np.testing.assert_array_equal(zero().prox(5.0, [1.0, 2.0]), [1.0, 2.0])


def test_with_ball_projects_the_unconstrained_prox():
    f = quadratic_data().with_ball(0.5)

    out = f.prox(1.0, np.array([[4.0], [0.0]]))

    np.testing.assert_allclose(out, [[0.5], [0.0]])
    assert f.value([[1.0], [0.0]]) == float("inf")


def test_with_ball_rejects_non_isotropic_kinds():
    with pytest.raises(ParameterError):
        scaled_l1(1.0).with_ball(1.0)
    with pytest.raises(ParameterError):
        quadratic_data([1.0]).with_ball(1.0)


def test_bad_parameters():
    with pytest.raises(ParameterError):
        scaled_l1(-1.0)
    with pytest.raises(ParameterError):
        scaled_l1(1.0).prox(0.0, [1.0])
    with pytest.raises(ParameterError):
        prox_apply(zero(), -1.0, BlockVector([[1.0]]))


@pytest.mark.parametrize("tau", [0.1, 1.0, 3.0])
def test_closed_forms_match_the_oracle(tau):
    x = BlockVector([np.linspace(-3.0, 3.0, 13)])
    cases = [
        (scaled_l1(0.7), lambda w: 0.7 * abs(w)),
        (quadratic_data(0.5), lambda w: 0.5 * (w - 0.5) ** 2),
        (zero(), lambda w: 0.0),
    ]
    for f, f_value in cases:
        closed = prox_apply(f, tau, x)
        numeric = prox_oracle(f_value, tau, x, -10.0, 10.0, 1e-10)
        np.testing.assert_allclose(closed[0], numeric[0], atol=1e-6)


def test_oracle_on_a_quartic():
    w = prox_oracle(lambda v: v**4, 1.0, BlockVector([[1.0]]), -2.0, 2.0, 1e-12)[0][0]

    assert abs(4 * w**3 + w - 1) < 1e-6
    assert w == pytest.approx(0.5, abs=1e-6)


def test_oracle_rejects_bad_interval():
    with pytest.raises(ParameterError):
        prox_oracle(abs, 1.0, BlockVector([[0.0]]), 1.0, 1.0, 1e-8)


def test_oracle_grid_defaults_to_the_setting(settings_env, monkeypatch):
    settings_env(oracle_grid_points=1500)
    sizes = []
    linspace = np.linspace

    def recording_linspace(lo, hi, num, *args, **kwargs):
        sizes.append(num)
        return linspace(lo, hi, num, *args, **kwargs)

    monkeypatch.setattr(np, "linspace", recording_linspace)

    prox_oracle(abs, 1.0, BlockVector([[0.3]]), -1.0, 1.0, 1e-8)

    assert 1500 in sizes
