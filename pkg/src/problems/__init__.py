"""Saddle problems: couplings, the problem bundle, factories, images and references."""

from src.problems.couplings import (
    Coupling,
    LinearCoupling,
    PottsCoupling,
    PrimalOnlyCoupling,
    TwoBlockCoupling,
    rho,
)
from src.problems.factories import (
    block_bilinear,
    make_problem,
    potts,
    potts_objective,
    potts_zero_function_check,
    quadratic_saddle,
    rof,
)
from src.problems.reference import analytic_reference, kkt_reference, long_run_reference
from src.problems.saddle import (
    CouplingEval,
    SaddleProblem,
    coupling_eval,
    fixed_point_map,
    optimality_residual,
)

__all__ = [
    # couplings
    "Coupling",
    "LinearCoupling",
    "TwoBlockCoupling",
    "PottsCoupling",
    "PrimalOnlyCoupling",
    "rho",
    # saddle
    "SaddleProblem",
    "CouplingEval",
    "coupling_eval",
    "fixed_point_map",
    "optimality_residual",
    # factories
    "make_problem",
    "rof",
    "potts",
    "quadratic_saddle",
    "block_bilinear",
    "potts_zero_function_check",
    "potts_objective",
    # reference points
    "kkt_reference",
    "analytic_reference",
    "long_run_reference",
]
