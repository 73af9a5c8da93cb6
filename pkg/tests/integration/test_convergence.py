"""Convergence behaviour and monitors on problems with known saddle points."""

import numpy as np
import pytest

from src.core.errors import CertificateRejected
from src.diagnostics.gaps import duality_gap_rof
from src.diagnostics.monitors import descent_check, inertial_descent_check, monitor_tolerance, trace_gaps
from src.diagnostics.rates import rate_fit
from src.models.solver import SolverOptions
from src.models.steps import StepLengths
from src.problems.factories import potts, potts_zero_function_check
from src.problems.synthetic import two_region
from src.solvers import InertialPDPS, solve_inertial_pdps, solve_modified_pdps, solve_pdps
from src.steprules.auto import auto_steps


def test_rof_fejer_margins_stay_nonnegative(rof_problem, rof_steps, rof_reference):
    opts = SolverOptions(max_iter=300, reference=rof_reference)

    trace = solve_pdps(rof_problem, rof_steps, rof_problem.zeros(), opts)

    for record in trace.records[1:]:
        assert record.fejer_margin >= -monitor_tolerance(record.b0_to_ref, record.fejer_margin)
        assert record.lagrangian_gap >= -1e-12


def test_rof_descent_and_ergodic_bound(rof_problem, rof_steps, rof_reference):
    opts = SolverOptions(max_iter=200, store_iterates=True)
    trace = solve_pdps(rof_problem, rof_steps, rof_problem.zeros(), opts)
    ubar = rof_reference.u_bar
    gaps = trace_gaps(rof_problem, trace, ubar)

    for n in (1, 10, 100, 200):
        report = descent_check(trace, rof_problem, rof_steps, ubar, gaps, n)
        assert report.holds, report.to_summary()
        assert report.ergodic_holds, report.to_summary()


def test_rof_approaches_the_analytic_solution(rof_problem, rof_steps, rof_reference, rof_instance):
    trace = solve_pdps(rof_problem, rof_steps, rof_problem.zeros(), SolverOptions(max_iter=2000))

    error = np.linalg.norm(trace.final_u.x[0] - rof_instance.x_bar)
    assert error < 0.1 * np.linalg.norm(rof_instance.x_bar)
    assert duality_gap_rof(rof_problem, trace.final_u) < duality_gap_rof(rof_problem, rof_problem.zeros())


def test_strongly_convex_concave_rate_is_linear(quad_problem):
    trace = solve_pdps(quad_problem, StepLengths.single(0.5, 0.5), quad_problem.zeros(), SolverOptions(max_iter=100))
    series = [(k, r) for k, r in trace.residuals() if k > 0 and r > 1e-12]

    fit = rate_fit(series, "geometric")

    assert fit.ratio < 1.0
    assert fit.r_squared > 0.95


def test_distance_to_the_kkt_solution_is_nonincreasing(quad_problem, quad_reference):
    opts = SolverOptions(max_iter=40, reference=quad_reference)

    trace = solve_pdps(quad_problem, StepLengths.single(0.5, 0.5), quad_problem.zeros(), opts)

    b0 = [r.b0_to_ref for r in trace.records]
    for before, after in zip(b0, b0[1:], strict=False):
        assert after <= before + monitor_tolerance(before)


def test_ergodic_gap_decays_at_least_like_one_over_n(quad_problem, quad_reference):
    steps = StepLengths.single(0.5, 0.5)
    trace = solve_pdps(quad_problem, steps, quad_problem.zeros(), SolverOptions(max_iter=80, store_iterates=True))
    ubar = quad_reference.u_bar
    gaps = trace_gaps(quad_problem, trace, ubar)

    reports = [descent_check(trace, quad_problem, steps, ubar, gaps, n) for n in (5, 20, 80)]

    assert all(r.ergodic_holds for r in reports)
    assert reports[-1].ergodic_bound == pytest.approx(reports[0].ergodic_bound * 5 / 80)


def test_inertial_run_converges_and_satisfies_its_descent(rof_problem, rof_reference):
    steps = StepLengths.single(0.35, 0.35, 0.3)
    trace = solve_inertial_pdps(
        rof_problem, steps, rof_problem.zeros(), SolverOptions(max_iter=150, store_iterates=True)
    )
    ubar = rof_reference.u_bar
    gaps = trace_gaps(rof_problem, trace, ubar)

    assert {c.rule for c in trace.certificates} == {"bilinear", "inertia_lambda"}
    for n in (1, 50, 150):
        report = inertial_descent_check(trace, rof_problem, steps, ubar, gaps, n)
        assert report.epsilon == pytest.approx(0.1)
        assert report.holds
    assert trace.records[-1].residual < trace.records[1].residual


def test_excessive_inertia_is_rejected(rof_problem):
    with pytest.raises(CertificateRejected) as info:
        InertialPDPS(rof_problem, StepLengths.single(0.35, 0.35, 0.34))

    assert info.value.certificate.rule == "inertia_lambda"
    assert info.value.certificate.margin == pytest.approx(-0.02)


def test_potts_segmentation_reaches_a_stationary_point():
    b = two_region((8, 8))
    p = potts(b)
    steps = auto_steps(p, "modified_pdps")
    opts = SolverOptions(max_iter=20_000, tol=1e-8, store_iterates=True)

    trace = solve_modified_pdps(p, steps, p.point([b], [np.zeros((2, 8, 8))]), opts)

    assert trace.stop_reason == "tol"
    assert trace.final_residual < 1e-6
    assert trace.certificate_valid, trace.to_summary()
    moves = [a.distance(c) for a, c in zip(trace.iterates, trace.iterates[1:], strict=False)]
    tail = moves[len(moves) // 2 :]
    window = 50
    peaks = [max(tail[i : i + window]) for i in range(0, len(tail) - window + 1, window)]
    assert all(later <= earlier for earlier, later in zip(peaks, peaks[1:], strict=False))
    assert tail[-1] < tail[0]


@pytest.mark.parametrize(("t", "expected"), [(0.0, 0.0), (0.5, 1.0), (-0.5, 1.0), (2.0, 1.0), (-2.0, 1.0)])
def test_zero_function_is_recovered(t, expected):
    assert potts_zero_function_check(t) == pytest.approx(expected, abs=1e-6)
