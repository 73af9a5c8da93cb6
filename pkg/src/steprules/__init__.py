"""Step-length certificates and operator-norm estimation.

The default step policy lives in :mod:`src.steprules.auto`; it depends on the
problem layer and is imported from there directly.
"""

from src.steprules.certificates import (
    certify,
    certify_basic,
    certify_block,
    certify_dynamic,
    optimise_block_factors,
)
from src.steprules.operator_norm import estimate_operator_norm, operator_norm

__all__ = [
    "certify",
    "certify_basic",
    "certify_block",
    "certify_dynamic",
    "optimise_block_factors",
    "estimate_operator_norm",
    "operator_norm",
]
