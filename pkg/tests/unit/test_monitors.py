"""Fejer and descent monitor unit tests."""

import pytest

from src.core.errors import ParameterError
from src.diagnostics.monitors import (
    descent_check,
    fejer_residual,
    inertial_descent_check,
    monitor_tolerance,
    trace_gaps,
)
from src.models.solver import SolverOptions
from src.models.steps import StepLengths
from src.solvers import solve_pdps

STEPS = StepLengths.single(0.5, 0.5)


@pytest.fixture
def stored_trace(quad_problem):
    opts = SolverOptions(max_iter=30, store_iterates=True)
    return solve_pdps(quad_problem, STEPS, quad_problem.zeros(), opts)


def test_monitor_tolerance():
    assert monitor_tolerance() == pytest.approx(1e-9)
    assert monitor_tolerance(0.0, -1e3) == pytest.approx(1e-9 + 1e-6)


def test_fejer_residual_of_a_pdps_step(quad_problem, quad_reference, stored_trace):
    ubar = quad_reference.u_bar
    u0, u1 = stored_trace.iterates[0], stored_trace.iterates[1]

    margin = fejer_residual(quad_problem, STEPS, ubar, u0, u1, 0.0)

    assert margin >= -monitor_tolerance(margin)


def test_descent_with_lagrangian_gaps(quad_problem, quad_reference, stored_trace):
    ubar = quad_reference.u_bar
    gaps = trace_gaps(quad_problem, stored_trace, ubar)

    for n in (1, 10, 30):
        report = descent_check(stored_trace, quad_problem, STEPS, ubar, gaps, n)
        assert report.holds
        assert report.ergodic_holds
        assert report.ergodic_bound == pytest.approx(report.rhs / n)


def test_descent_summary(quad_problem, quad_reference, stored_trace):
    ubar = quad_reference.u_bar
    report = descent_check(stored_trace, quad_problem, STEPS, ubar, trace_gaps(quad_problem, stored_trace, ubar), 5)

    assert report.to_summary().startswith("N=5: ")
    assert "holds" in report.to_summary()


def test_inertial_check_without_inertia_matches_descent(quad_problem, quad_reference, stored_trace):
    ubar = quad_reference.u_bar
    gaps = trace_gaps(quad_problem, stored_trace, ubar)

    plain = descent_check(stored_trace, quad_problem, STEPS, ubar, gaps, 20)
    inertial = inertial_descent_check(stored_trace, quad_problem, STEPS, ubar, gaps, 20)

    assert inertial.epsilon == 1.0
    assert inertial.lhs == pytest.approx(plain.lhs)
    assert inertial.rhs == pytest.approx(plain.rhs)
    assert inertial.holds


def test_inertial_epsilon_starts_from_zero_lambda(quad_problem, quad_reference, stored_trace):
    ubar = quad_reference.u_bar
    gaps = trace_gaps(quad_problem, stored_trace, ubar)
    steps = StepLengths.single(0.5, 0.5, 0.3)

    report = inertial_descent_check(stored_trace, quad_problem, steps, ubar, gaps, 3)

    assert report.epsilon == pytest.approx(0.1)


def test_monitors_need_stored_iterates(quad_problem, quad_reference):
    trace = solve_pdps(quad_problem, STEPS, quad_problem.zeros(), SolverOptions(max_iter=3))
    ubar = quad_reference.u_bar

    with pytest.raises(ParameterError):
        descent_check(trace, quad_problem, STEPS, ubar, [0.0] * 3, 3)
    with pytest.raises(ParameterError):
        trace_gaps(quad_problem, trace, ubar)


def test_descent_argument_checks(quad_problem, quad_reference, stored_trace):
    ubar = quad_reference.u_bar
    with pytest.raises(ParameterError):
        descent_check(stored_trace, quad_problem, STEPS, ubar, [0.0] * 30, 31)
    with pytest.raises(ParameterError):
        descent_check(stored_trace, quad_problem, STEPS, ubar, [0.0] * 2, 5)
