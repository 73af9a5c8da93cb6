"""Pydantic model validation tests."""

import math

import pytest
from pydantic import ValidationError

from src.core.blockvec import BlockVector, PrimalDual
from src.core.errors import LayoutError
from src.models import (
    CouplingConstants,
    IterationRecord,
    IterationTrace,
    ReferencePoint,
    Region,
    RunConfig,
    SampleRegion,
    SolverOptions,
    StepLengths,
)


def point(x: float, y: float) -> PrimalDual:
    return PrimalDual(BlockVector([[x]]), BlockVector([[y]]))


class TestStepLengths:
    def test_single_and_broadcast(self):
        steps = StepLengths.single(0.1, 0.2)

        assert steps.is_single
        assert steps.taus(3) == (0.1, 0.1, 0.1)
        assert steps.sigmas(1) == (0.2,)

    def test_broadcast_mismatch(self):
        with pytest.raises(LayoutError):
            StepLengths(tau=(0.1, 0.2), sigma=(0.1,)).taus(3)

    @pytest.mark.parametrize("tau", [0.0, -1.0, math.inf, math.nan])
    def test_steps_must_be_positive_and_finite(self, tau):
        with pytest.raises(ValidationError):
            StepLengths.single(tau, 0.1)

    def test_schedule_is_held_and_non_increasing(self):
        steps = StepLengths(tau=(0.1,), sigma=(0.1,), lambda_schedule=(0.3, 0.2))

        assert [steps.lam(k) for k in range(5)] == [0.0, 0.3, 0.2, 0.2, 0.2]
        with pytest.raises(ValidationError, match="non-increasing"):
            StepLengths(tau=(0.1,), sigma=(0.1,), lambda_schedule=(0.1, 0.2))

    def test_no_schedule_means_no_inertia(self):
        assert StepLengths.single(0.1, 0.1).lam(7) == 0.0

    def test_scaled(self):
        steps = StepLengths.single(0.2, 0.4, 0.3).scaled(0.5)

        assert steps.tau == (0.1,)
        assert steps.sigma == (0.2,)
        assert steps.lambda_schedule == (0.15,)

    def test_summary(self):
        assert StepLengths.single(0.35, 0.35, 0.3).to_summary() == "tau=(0.35,) sigma=(0.35,) lambda=0.3"


class TestCouplingConstants:
    def test_affine_needs_zero_dky(self):
        with pytest.raises(ValidationError):
            CouplingConstants(affine_in_y=True, l_dky=1.0)

    def test_bilinear_implies_affine(self):
        with pytest.raises(ValidationError):
            CouplingConstants(affine_in_y=False, bilinear=True)

    def test_block_matrices_are_rectangular(self):
        with pytest.raises(ValidationError):
            CouplingConstants(affine_in_y=True, block_norms=((1.0, 2.0), (1.0,)))

    def test_summary(self):
        text = CouplingConstants(affine_in_y=True, bilinear=True, op_norm=2.0).to_summary()

        assert text.startswith("bilinear [global]")
        assert "||A||=2" in text


class TestRegion:
    def test_membership(self):
        region = Region(x_lower=0.0, x_upper=1.0, y_radius=0.5)

        assert region.x_radius == 1.0
        assert region.contains(point(0.5, 0.5))
        assert not region.contains(point(1.5, 0.0))
        assert not region.contains(point(0.5, -0.6))

    def test_empty_box(self):
        with pytest.raises(ValidationError):
            Region(x_lower=1.0, x_upper=1.0)

    def test_unbounded_sides(self):
        assert Region().contains(point(1e9, -1e9))
        assert Region().x_radius is None


def test_reference_point_must_meet_its_tolerance():
    with pytest.raises(ValidationError):
        ReferencePoint(u_bar=point(0, 0), provenance="kkt-solve", residual=1e-6, tolerance=1e-10)

    ref = ReferencePoint(u_bar=point(0, 0), provenance="analytic", residual=1e-6, tolerance=1e-10)
    assert "analytic" in ref.to_summary()


def test_sample_region_must_be_nonempty():
    with pytest.raises(ValidationError):
        SampleRegion(kind="box", lower=1.0, upper=0.0)
    with pytest.raises(ValidationError):
        SampleRegion(kind="ball", radius=0.0)


class TestTrace:
    def test_records_must_be_finite(self):
        with pytest.raises(ValidationError):
            IterationRecord(k=0, residual=1.0, lagrangian_gap=math.inf)

    def test_records_must_increase(self):
        records = (IterationRecord(k=1, residual=1.0), IterationRecord(k=1, residual=0.5))
        with pytest.raises(ValidationError):
            IterationTrace(solver="pdps", records=records, final_u=point(0, 0), stop_reason="max_iter", iterations=1)

    def test_stored_iterates_match_iterations(self):
        with pytest.raises(ValidationError):
            IterationTrace(
                solver="pdps",
                records=(),
                final_u=point(0, 0),
                stop_reason="max_iter",
                iterations=2,
                iterates=(point(0, 0),),
            )

    def test_summary(self):
        trace = IterationTrace(
            solver="pdps",
            records=(IterationRecord(k=0, residual=2.0), IterationRecord(k=4, residual=1e-9)),
            final_u=point(0, 0),
            stop_reason="tol",
            iterations=4,
        )

        assert trace.final_residual == 1e-9
        assert trace.residuals() == [(0, 2.0), (4, 1e-9)]
        assert trace.to_summary() == "pdps: 4 iterations, stop=tol, residual 1.00e-09"


def test_solver_options_bounds():
    with pytest.raises(ValidationError):
        SolverOptions(max_iter=0)
    with pytest.raises(ValidationError):
        SolverOptions(tol=-1.0)
    with pytest.raises(ValidationError):
        SolverOptions(dual_ball=0.0)


def test_run_config_defaults():
    config = RunConfig(problem="rof")

    assert config.solver == "pdps"
    assert config.auto_steps
    assert config.reference == "none"
    assert config.to_summary() == "rof via pdps, steps=auto, max_iter=1000"
    with pytest.raises(ValidationError):
        RunConfig(problem="lasso")
