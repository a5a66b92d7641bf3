"""Zero-sum games (M, -M): exact minimax via linear programming.

The row player maximizes x^T M y and the column player minimizes it.  The
reference backend is a dense tableau simplex with Bland's rule; the scipy
HiGHS backend exists for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from .game import BimatrixGame, MixedStrategy

SECURITY_SLACK = 1e-7
_PIVOT_EPS = 1e-12


class SolverError(RuntimeError):
    """The LP backend failed on an input that is always feasible and bounded."""


@dataclass(frozen=True)
class ZeroSumSolution:
    x: MixedStrategy  # maximizer
    y: MixedStrategy  # minimizer
    value: float


class LPBackend(Protocol):
    def __call__(self, P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """For a strictly positive matrix P, solve max 1.w s.t. P w <= 1, w >= 0.

        Returns ``(u, w)`` where ``w`` is the optimal primal and ``u`` the
        optimal dual (min 1.u s.t. P^T u >= 1, u >= 0).
        """


def simplex_backend(P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense tableau simplex, Bland's rule, slack basis as the starting vertex."""
    m, k = P.shape
    T = np.zeros((m + 1, k + m + 1))
    T[:m, :k] = P
    T[:m, k : k + m] = np.eye(m)
    T[:m, -1] = 1.0
    # objective row stores reduced costs z_j - c_j; negative means improving
    T[m, :k] = -1.0
    basis = np.arange(k, k + m)
    max_iter = 50 * (m + k) + 1000
    for _ in range(max_iter):
        improving = np.flatnonzero(T[m, :-1] < -_PIVOT_EPS)
        if improving.size == 0:
            break
        col = improving[0]
        a = T[:m, col]
        pos = np.flatnonzero(a > _PIVOT_EPS)
        if pos.size == 0:
            raise SolverError("LP unbounded; input matrix was not strictly positive")
        ratios = T[pos, -1] / a[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-13 * max(1.0, abs(best))]
        row = ties[np.argmin(basis[ties])]
        T[row] /= T[row, col]
        f = T[:, col].copy()
        f[row] = 0.0
        T -= np.outer(f, T[row])
        basis[row] = col
    else:
        raise SolverError("simplex did not converge")
    w = np.zeros(k + m)
    w[basis] = T[:m, -1]
    u = T[m, k : k + m].copy()
    return np.clip(u, 0.0, None), np.clip(w[:k], 0.0, None)


def highs_backend(P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    from scipy.optimize import linprog

    m, k = P.shape
    res = linprog(-np.ones(k), A_ub=P, b_ub=np.ones(m), bounds=(0, None), method="highs")
    if res.status != 0:
        raise SolverError(f"HiGHS failed: {res.message}")
    u = -res.ineqlin.marginals
    return np.clip(u, 0.0, None), np.clip(res.x, 0.0, None)


BACKENDS: dict[str, Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]] = {
    "simplex": simplex_backend,
    "highs": highs_backend,
}


def solve_zero_sum(M: np.ndarray, backend: str = "auto") -> ZeroSumSolution:
    """Minimax strategies and value of the zero-sum game (M, -M).

    Both security inequalities are re-checked against every pure strategy;
    a violation beyond 1e-7 raises :class:`SolverError`.  The ``"auto"``
    backend runs the simplex and retries with HiGHS if that check fails,
    which happens on some highly degenerate (e.g. 0/1) matrices.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.size == 0:
        raise ValueError("M must be a non-empty matrix")
    if backend == "auto":
        try:
            return _solve_checked(M, "simplex")
        except SolverError:
            return _solve_checked(M, "highs")
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {sorted(BACKENDS)} or 'auto'")
    return _solve_checked(M, backend)


def _solve_checked(M: np.ndarray, backend: str) -> ZeroSumSolution:
    shift = 1.0 - M.min()
    P = M + shift  # all entries >= 1, so the LP is feasible and bounded
    u, w = BACKENDS[backend](P)
    su, sw = u.sum(), w.sum()
    if su <= 0 or sw <= 0:
        raise SolverError("degenerate LP solution")
    x = MixedStrategy.from_weights(u)
    y = MixedStrategy.from_weights(w)
    value = 1.0 / sw - shift
    sec_x = security_of(x, M)
    cap_y = float((M @ y.probs).max())
    if sec_x < value - SECURITY_SLACK or cap_y > value + SECURITY_SLACK:
        raise SolverError(
            f"security check failed: min_j x^T M = {sec_x}, max_i M y = {cap_y}, value = {value}"
        )
    return ZeroSumSolution(x=x, y=y, value=float(value))


def security_of(x: MixedStrategy, M: np.ndarray) -> float:
    """Worst-case payoff ``min_j (x^T M)_j`` guaranteed to the maximizer by ``x``."""
    M = np.asarray(M, dtype=float)
    if x.n != M.shape[0]:
        raise ValueError(f"strategy length {x.n} does not match {M.shape[0]} rows")
    return float((x.probs @ M).min())


@dataclass(frozen=True)
class Relaxations:
    """Solutions of the two single-player zero-sum games of a bimatrix game.

    ``x_star, y_star`` solve (R, -R) and ``v_r`` is the value ``x_star``
    secures for the row player.  ``y_hat`` secures ``v_c`` for the column
    player in C and ``x_hat`` caps every column's payoff against it at ``v_c``.
    """

    x_star: MixedStrategy
    y_star: MixedStrategy
    x_hat: MixedStrategy
    y_hat: MixedStrategy
    v_r: float
    v_c: float

    def swapped(self) -> "Relaxations":
        return Relaxations(
            x_star=self.y_hat,
            y_star=self.x_hat,
            x_hat=self.y_star,
            y_hat=self.x_star,
            v_r=self.v_c,
            v_c=self.v_r,
        )


def solve_relaxations(game: BimatrixGame, backend: str = "auto") -> Relaxations:
    row = solve_zero_sum(game.R, backend)
    # (-C, C) from the row player's seat: maximizing -C is minimizing the
    # column player's best response, so the maximizer is x_hat.
    col = solve_zero_sum(-game.C, backend)
    return Relaxations(
        x_star=row.x,
        y_star=row.y,
        x_hat=col.x,
        y_hat=col.y,
        v_r=row.value,
        v_c=-col.value,
    )
