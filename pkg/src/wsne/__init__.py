"""Approximate well-supported and ordinary Nash equilibria of bimatrix games."""

from .algorithms import base_wsne, improved_wsne, optimal_z, winlose_wsne
from .apxne import THETA, apx_ne
from .game import BimatrixGame, MixedStrategy, Profile, RegretReport, SolveOutcome, Step, verify
from .zerosum import solve_relaxations, solve_zero_sum

__all__ = [
    "BimatrixGame",
    "MixedStrategy",
    "Profile",
    "RegretReport",
    "SolveOutcome",
    "Step",
    "THETA",
    "apx_ne",
    "base_wsne",
    "improved_wsne",
    "optimal_z",
    "solve_relaxations",
    "solve_zero_sum",
    "verify",
    "winlose_wsne",
]
