"""Greedy-approximation lab: sparse vectors, thresholding greedy sets, gap
families and the norms built from them, with experiments that check the
inequalities relating their constants."""

from .core import (
    BruteForceCapExceeded,
    GreedyOutcome,
    IndexSet,
    InsufficientSupport,
    SparseVector,
    greedy_residual,
    greedy_set,
    indicator,
    sigma_tilde,
)
from .families import Family, GapSequence, GapSet, f_set, pf_member
from .norms import NormOracle, make_norm

__version__ = "0.1.0"

__all__ = [
    "BruteForceCapExceeded",
    "Family",
    "GapSequence",
    "GapSet",
    "GreedyOutcome",
    "IndexSet",
    "InsufficientSupport",
    "NormOracle",
    "SparseVector",
    "f_set",
    "greedy_residual",
    "greedy_set",
    "indicator",
    "make_norm",
    "pf_member",
    "sigma_tilde",
]
