#!/usr/bin/env python3
"""Verification script for the Pydantic models.

Builds every model from a small ROF denoising run and a 3x2 quadratic
saddle, prints their summaries and verifies they agree with each other.

Run with:
    python -m scripts.verify_models
    python scripts/verify_models.py
"""

import sys
import traceback

# Add project root to path for direct script execution
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np

from src.core.bregman import ellipticity_probe
from src.diagnostics.gaps import growth_gap
from src.diagnostics.monitors import descent_check, trace_gaps
from src.diagnostics.rates import rate_fit
from src.models import (
    Certificate,
    IterationTrace,
    Region,
    RunConfig,
    SampleRegion,
    SolverOptions,
    StepLengths,
)
from src.problems.factories import quadratic_saddle, rof
from src.problems.reference import analytic_reference, kkt_reference
from src.problems.synthetic import analytic_rof_instance
from src.solvers import solve_pdps
from src.steprules.auto import auto_steps, certify_run


def verify_rof() -> IterationTrace:
    """ROF on an 8x8 two-region image with a known saddle point."""

    # =========================================================================
    # 1. Problem and constants
    # =========================================================================

    instance = analytic_rof_instance((8, 8), alpha=0.2)
    p = rof(instance.b, instance.alpha)
    print(f"CouplingConstants.to_summary(): {p.constants.to_summary()}")

    reference = analytic_reference(p, p.point([instance.x_bar], [instance.y_bar]))
    print(f"ReferencePoint.to_summary(): {reference.to_summary()}")

    # =========================================================================
    # 2. Steps and certificates
    # =========================================================================

    steps = auto_steps(p, "pdps")
    print(f"\nStepLengths.to_summary(): {steps.to_summary()}")
    certificates: tuple[Certificate, ...] = certify_run(p, "pdps", steps)
    for cert in certificates:
        print(f"Certificate.to_summary(): {cert.to_summary()}")
        print(f"Certificate.passed: {cert.passed}")

    probe = ellipticity_probe(p.generator(steps), SampleRegion(kind="ball", radius=1.0), 0.0, 200, seed=0)
    print(f"ProbeReport.to_summary(): {probe.to_summary()}")

    # =========================================================================
    # 3. Solve and monitor
    # =========================================================================

    trace = solve_pdps(
        p, steps, p.zeros(), SolverOptions(max_iter=100, store_iterates=True, reference=reference)
    )
    print(f"\nIterationTrace.to_summary(): {trace.to_summary()}")
    print(f"IterationTrace.certificate_valid: {trace.certificate_valid}")

    gaps = trace_gaps(p, trace, reference.u_bar)
    report = descent_check(trace, p, steps, reference.u_bar, gaps, 100)
    print(f"DescentReport.to_summary(): {report.to_summary()}")
    if not report.holds:
        raise AssertionError("descent inequality violated on the ROF run")

    growth = growth_gap(p, trace.final_u, reference.u_bar, "convex_concave")
    print(f"GrowthGap.value: {growth.value}")

    return trace


def verify_quadratic() -> None:
    """Strongly convex-concave saddle with a KKT reference."""

    A = np.array([[1.0, 0.5], [0.0, 1.0], [0.3, 0.2]])
    p = quadratic_saddle(A, [1.0, -1.0])
    reference = kkt_reference(p)
    steps = StepLengths.single(0.5, 0.5)

    trace = solve_pdps(p, steps, p.zeros(), SolverOptions(max_iter=60, reference=reference))
    print(f"\nIterationTrace.to_summary(): {trace.to_summary()}")

    series = [(k, r) for k, r in trace.residuals() if k > 0 and r > 1e-12]
    fit = rate_fit(series, "geometric")
    print(f"RateFit.to_summary(): {fit.to_summary()}")

    region = Region(x_lower=-2.0, x_upper=2.0, y_radius=2.0)
    print(f"Region.contains(final): {region.contains(trace.final_u)}")


def main() -> None:
    """Run the verification script."""
    print("=" * 80)
    print("pdsplit - Model Verification Script")
    print("=" * 80)
    print("\nScenarios:")
    print("  - ROF denoising, 8x8 two-region image, alpha 0.2, automatic steps")
    print("  - quadratic saddle, 3x2 coupling, tau = sigma = 0.5")
    print("=" * 80)

    try:
        verify_rof()
        verify_quadratic()

        config = RunConfig(problem="rof", problem_params={"alpha": 0.2, "size": 8})
        print("\n" + "=" * 80)
        print("RUN CONFIG JSON:")
        print("=" * 80)
        print(config.model_dump_json(indent=2))

        print("\n" + "=" * 80)
        print("✅ All models verified successfully")
        print("=" * 80)

    except Exception as e:
        print("\n" + "=" * 80)
        print(f"❌ VERIFICATION FAILED: {type(e).__name__}: {e}")
        print("=" * 80)
        traceback.print_exc()
        sys.exit(1)


if __name__ == "__main__":
    main()
