"""Solver driver unit tests."""

import numpy as np
import pytest

from src.core.errors import CertificateRejected, LayoutError, ParameterError, ProblemError
from src.core.operators import MatrixOperator
from src.core.prox import quadratic_data
from src.models.problem import Region
from src.models.solver import SolverOptions
from src.models.steps import StepLengths
from src.problems.factories import block_bilinear, fb, potts, rof, two_block
from src.solvers import (
    PDPS,
    BlockPDPS,
    InertialPDPS,
    ModifiedPDPS,
    ergodic_average,
    solve_block_pdps,
    solve_inertial_pdps,
    solve_modified_pdps,
    solve_pdps,
)


def test_scalar_saddle_converges(scalar_saddle):
    steps = StepLengths.single(0.5, 0.5)

    trace = solve_pdps(scalar_saddle, steps, scalar_saddle.zeros(), SolverOptions(max_iter=200))

    assert trace.stop_reason == "max_iter"
    assert trace.iterations == 200
    assert trace.final_u.x[0][0] == pytest.approx(0.5, abs=1e-8)
    assert trace.final_u.y[0][0] == pytest.approx(0.5, abs=1e-8)
    assert trace.certificates[0].rule == "bilinear"


@pytest.mark.parametrize("solve", [solve_block_pdps, solve_inertial_pdps, solve_modified_pdps])
def test_every_solver_reaches_the_scalar_saddle(scalar_saddle, solve):
    trace = solve(scalar_saddle, StepLengths.single(0.5, 0.5), scalar_saddle.zeros(), SolverOptions(max_iter=400))

    np.testing.assert_allclose(trace.final_u.concat().flat(), [0.5, 0.5], atol=1e-7)


def test_tolerance_stops_early(scalar_saddle):
    opts = SolverOptions(max_iter=10_000, tol=1e-10)

    trace = solve_pdps(scalar_saddle, StepLengths.single(0.5, 0.5), scalar_saddle.zeros(), opts)

    assert trace.stop_reason == "tol"
    assert trace.iterations < 10_000
    assert trace.final_residual <= 1e-10


def test_zero_tolerance_runs_to_max_iter(scalar_saddle):
    trace = solve_pdps(scalar_saddle, StepLengths.single(0.5, 0.5), scalar_saddle.zeros(), SolverOptions(max_iter=50))

    assert trace.stop_reason == "max_iter"
    assert trace.records[-1].k == 50


def test_monitor_every_keeps_the_last_iteration(scalar_saddle):
    opts = SolverOptions(max_iter=20, monitor_every=7)

    trace = solve_pdps(scalar_saddle, StepLengths.single(0.5, 0.5), scalar_saddle.zeros(), opts)

    assert [r.k for r in trace.records] == [0, 7, 14, 20]


def test_pdps_rejects_block_steps(quad_problem):
    with pytest.raises(LayoutError):
        PDPS(quad_problem, StepLengths(tau=(0.1, 0.1), sigma=(0.1,)))


def test_affine_solvers_reject_potts():
    p = potts(np.eye(4), alpha=0.05)
    steps = StepLengths.single(0.01, 0.01)
    with pytest.raises(ProblemError, match="modified_pdps"):
        PDPS(p, steps)
    with pytest.raises(ProblemError):
        BlockPDPS(p, steps)
    with pytest.raises(ProblemError, match="bilinear"):
        InertialPDPS(p, steps)


def test_failing_certificate_is_rejected(scalar_saddle):
    with pytest.raises(CertificateRejected) as info:
        PDPS(scalar_saddle, StepLengths.single(1.1, 1.1))

    assert info.value.certificate.rule == "bilinear"
    assert info.value.certificate.margin == pytest.approx(-0.21)


def test_uncertified_run_proceeds(scalar_saddle):
    opts = SolverOptions(max_iter=5, uncertified=True)

    trace = solve_pdps(scalar_saddle, StepLengths.single(1.1, 1.1), scalar_saddle.zeros(), opts)

    assert trace.iterations == 5
    assert trace.certificates[0].verdict == "fail"


def test_missing_constants_need_the_uncertified_flag():
    p = two_block({"shape": (4, 4)})
    steps = StepLengths.single(10.0, 10.0)

    with pytest.raises(ParameterError, match="l_dk"):
        ModifiedPDPS(p, steps, SolverOptions(max_iter=5))

    solver = ModifiedPDPS(p, steps, SolverOptions(max_iter=2, uncertified=True))
    assert solver.certificates == ()


def test_numeric_failure_stops_the_run():
    def gradient(x):
        return np.where(x > 1.0, np.nan, -1.0)

    p = fb({"energy": lambda x: -float(np.sum(x)), "gradient": gradient, "lipschitz": 1.0, "dim": 1, "f": "zero"})

    trace = solve_pdps(p, StepLengths.single(0.5, 0.5), p.zeros(), SolverOptions(max_iter=100))

    assert trace.stop_reason == "numeric"
    assert trace.iterations == 3
    assert trace.records[-1].k == 2
    assert trace.final_u.x[0][0] == pytest.approx(1.5)


def test_stored_iterates_and_ergodic_mean(quad_problem):
    opts = SolverOptions(max_iter=20, store_iterates=True, ergodic=True)

    trace = solve_pdps(quad_problem, StepLengths.single(0.5, 0.5), quad_problem.zeros(), opts)

    assert len(trace.iterates) == 21
    np.testing.assert_array_equal(trace.iterates[-1].concat().flat(), trace.final_u.concat().flat())
    mean = ergodic_average(trace, 20)
    np.testing.assert_array_equal(mean.concat().flat(), trace.final_ergodic.concat().flat())
    np.testing.assert_array_equal(ergodic_average(trace, 1).concat().flat(), trace.iterates[1].concat().flat())


def test_ergodic_average_needs_iterates(quad_problem):
    trace = solve_pdps(quad_problem, StepLengths.single(0.5, 0.5), quad_problem.zeros(), SolverOptions(max_iter=3))

    with pytest.raises(ParameterError):
        ergodic_average(trace, 1)


def test_reference_fills_the_monitors(quad_problem, quad_reference):
    opts = SolverOptions(max_iter=10, reference=quad_reference)

    trace = solve_pdps(quad_problem, StepLengths.single(0.5, 0.5), quad_problem.zeros(), opts)

    first, later = trace.records[0], trace.records[1:]
    assert first.fejer_margin is None
    assert first.b0_to_ref > 0
    assert all(r.fejer_margin is not None and r.lagrangian_gap is not None for r in later)
    assert all(r.wall_time is None for r in trace.records)


def test_wall_time_is_opt_in(scalar_saddle):
    opts = SolverOptions(max_iter=3, record_wall_time=True)

    trace = solve_pdps(scalar_saddle, StepLengths.single(0.5, 0.5), scalar_saddle.zeros(), opts)

    assert all(r.wall_time is not None and r.wall_time >= 0 for r in trace.records)


def test_leaving_the_region_invalidates_the_certificate(rof_instance, rof_steps):
    p = rof(rof_instance.b, rof_instance.alpha, region=Region(x_lower=0.4, x_upper=0.6))

    trace = solve_pdps(p, rof_steps, p.zeros(), SolverOptions(max_iter=5))

    assert trace.region_exits > 0
    assert not trace.certificate_valid
    assert "certificate invalidated" in trace.to_summary()


def test_constant_image_is_a_fixed_point():
    b = np.full((4, 4), 0.5)
    p = rof(b, alpha=0.1)
    u0 = p.point([b], [np.zeros((2, 4, 4))])

    trace = solve_pdps(p, StepLengths.single(0.25, 0.25), u0, SolverOptions(max_iter=3))

    np.testing.assert_allclose(trace.final_u.x[0], b, atol=1e-15)
    assert trace.final_residual == pytest.approx(0.0, abs=1e-14)


def test_dual_ball_option_wraps_the_conjugates(quad_problem):
    solver = PDPS(quad_problem, StepLengths.single(0.5, 0.5), SolverOptions(dual_ball=0.5))

    assert all(g.ball_radius == 0.5 for g in solver.problem.gstar_blocks)


def test_block_pdps_with_per_block_steps():
    p = block_bilinear(
        {(0, 0): MatrixOperator([[1.0]]), (0, 1): MatrixOperator([[2.0]])},
        [quadratic_data()],
        [quadratic_data(), quadratic_data()],
        ((1,),),
        ((1,), (1,)),
    )
    steps = StepLengths(tau=(0.3,), sigma=(0.9, 0.45))
    u0 = p.point([[1.0]], [[1.0], [1.0]])

    trace = solve_block_pdps(p, steps, u0, SolverOptions(max_iter=300))

    assert trace.certificates[0].rule == "block_bilinear"
    assert trace.final_residual < 1e-3 * trace.records[0].residual


def test_modified_handles_potts():
    p = potts(np.eye(4), alpha=0.05)
    solver = ModifiedPDPS(p, StepLengths.single(0.005, 0.004), SolverOptions(max_iter=5))

    trace = solver.run(p.zeros())

    assert trace.stop_reason == "max_iter"
    assert trace.certificates[0].rule == "modified_k"
