"""Primal-dual splitting solvers."""

from src.diagnostics.ergodic import ergodic_average, running_mean
from src.solvers.base import SaddleSolver
from src.solvers.inertial import InertialPDPS, solve_inertial_pdps
from src.solvers.modified import ModifiedPDPS, solve_modified_pdps
from src.solvers.pdps import PDPS, BlockPDPS, solve_block_pdps, solve_pdps

SOLVERS: dict[str, type[SaddleSolver]] = {
    "pdps": PDPS,
    "block_pdps": BlockPDPS,
    "inertial_pdps": InertialPDPS,
    "modified_pdps": ModifiedPDPS,
}

__all__ = [
    "SOLVERS",
    "SaddleSolver",
    "PDPS",
    "BlockPDPS",
    "InertialPDPS",
    "ModifiedPDPS",
    "solve_pdps",
    "solve_block_pdps",
    "solve_inertial_pdps",
    "solve_modified_pdps",
    "ergodic_average",
    "running_mean",
]
