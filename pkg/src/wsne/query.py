"""Payoff-query model: the game sits behind a counting oracle.

Algorithms here see payoffs only through :class:`PayoffOracle` calls, and
every revealed pure profile costs exactly one query.  When a sampling budget
would meet or exceed ``n^2`` queries the code enumerates the whole game
instead, which is both cheaper and exact.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .algorithms import (
    ONE_THIRD,
    TWO_THIRDS,
    EmptyBError,
    NotFoundError,
    find_matching_pennies_rows,
    improved_wsne,
    mp_profile,
    optimal_z,
    split_step_four,
)
from .game import TOL, BimatrixGame, MixedStrategy, Profile, SolveOutcome, Step
from .zerosum import ZeroSumSolution, solve_zero_sum

DEFAULT_C = 2.0
MWU_ROUNDS_C = 16.0
DEFAULT_QUERY_K = 320


class PayoffOracle:
    """Reveals ``(R_ij, C_ij)`` one pure profile at a time and counts every reveal.

    Batch helpers (a whole row, column or the full game) cost one query per
    entry.  With ``keep_log`` set every revealed ``(i, j)`` is recorded.
    """

    def __init__(self, game: BimatrixGame, keep_log: bool = False):
        self._game = game
        self.count = 0
        self.log: list[tuple[int, int]] | None = [] if keep_log else None

    @property
    def n(self) -> int:
        return self._game.n

    def _charge(self, k: int, pairs) -> None:
        self.count += k
        if self.log is not None:
            self.log.extend(pairs)

    def query(self, i: int, j: int) -> tuple[float, float]:
        self._charge(1, [(i, j)])
        return float(self._game.R[i, j]), float(self._game.C[i, j])

    def query_col(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        self._charge(n, ((i, j) for i in range(n)))
        return self._game.R[:, j].copy(), self._game.C[:, j].copy()

    def query_row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        self._charge(n, ((i, j) for j in range(n)))
        return self._game.R[i, :].copy(), self._game.C[i, :].copy()

    def query_all(self) -> BimatrixGame:
        n = self.n
        self._charge(n * n, ((i, j) for i in range(n) for j in range(n)))
        return BimatrixGame(self._game.R.copy(), self._game.C.copy())

    def log_csv(self) -> str:
        """CSV lines ``i,j,R_ij,C_ij`` for every logged query (debug only)."""
        if self.log is None:
            raise RuntimeError("oracle was created without keep_log")
        buf = io.StringIO()
        for i, j in self.log:
            buf.write(f"{i},{j},{float(self._game.R[i, j])!r},{float(self._game.C[i, j])!r}\n")
        return buf.getvalue()


class SwappedOracle:
    """The same oracle seen with the players exchanged: the game (C^T, R^T).

    Queries are forwarded to, and counted by, the wrapped oracle.
    """

    def __init__(self, base):
        self.base = base

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def count(self) -> int:
        return self.base.count

    def query(self, i, j):
        r, c = self.base.query(j, i)
        return c, r

    def query_col(self, j):
        r, c = self.base.query_row(j)
        return c, r

    def query_row(self, i):
        r, c = self.base.query_col(i)
        return c, r

    def query_all(self) -> BimatrixGame:
        g = self.base.query_all()
        return BimatrixGame(g.C.T, g.R.T)


@dataclass(frozen=True)
class ApproxPayoffVector:
    values: np.ndarray
    eps: float
    side: str  # "row": estimates R y; "col": estimates x^T C
    exact: bool = False


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_rounds(n: int, eps: float, c: float = DEFAULT_C) -> int:
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.ceil(c * math.log(max(n, 2)) / eps**2)


def mwu_rounds(n: int, eps: float) -> int:
    return sample_rounds(n, eps, MWU_ROUNDS_C)


def estimate_payoff_vectors(
    oracle,
    profile: Profile,
    eps: float,
    seed=0,
    sides: tuple[str, ...] = ("row", "col"),
    c: float = DEFAULT_C,
    force_sampling: bool = False,
) -> dict[str, ApproxPayoffVector]:
    """Approximate ``R y`` and/or ``x^T C`` from sampled pure opponents.

    Each of ``t = ceil(c ln n / eps^2)`` draws from ``y`` reveals one full
    column (n queries), and likewise draws from ``x`` reveal rows.
    """
    n = oracle.n
    t = sample_rounds(n, eps, c)
    rng = _rng(seed)
    out: dict[str, ApproxPayoffVector] = {}
    if not force_sampling and len(sides) * n * t >= n * n:
        g = oracle.query_all()
        if "row" in sides:
            out["row"] = ApproxPayoffVector(g.R @ profile.col.probs, eps, "row", True)
        if "col" in sides:
            out["col"] = ApproxPayoffVector(profile.row.probs @ g.C, eps, "col", True)
        return out
    if "row" in sides:
        acc = np.zeros(n)
        for j in rng.choice(n, size=t, p=profile.col.probs):
            acc += oracle.query_col(int(j))[0]
        out["row"] = ApproxPayoffVector(acc / t, eps, "row")
    if "col" in sides:
        acc = np.zeros(n)
        for i in rng.choice(n, size=t, p=profile.row.probs):
            acc += oracle.query_row(int(i))[1]
        out["col"] = ApproxPayoffVector(acc / t, eps, "col")
    return out


def query_zero_sum(oracle, side: str, eps: float, seed=0, force_sampling: bool = False) -> ZeroSumSolution:
    """Approximate minimax of one player's zero-sum relaxation.

    ``side="row"`` solves (R, -R) with the row player maximizing;
    ``side="col"`` solves the column player's game, so ``x`` is the column
    player's secure strategy and ``y`` the row player's punishing one.
    Runs simultaneous multiplicative weights for ``T = ceil(16 ln n / eps^2)``
    rounds; each round reveals one sampled opponent column and row.
    """
    if side not in ("row", "col"):
        raise ValueError("side must be 'row' or 'col'")
    view = oracle if side == "row" else SwappedOracle(oracle)
    n = view.n
    T = mwu_rounds(n, eps)
    if not force_sampling and 2 * n * T >= n * n:
        g = view.query_all()
        return solve_zero_sum(g.R)
    rng = _rng(seed)
    eta = eps / 4
    log_p = np.zeros(n)
    log_q = np.zeros(n)
    sum_p = np.zeros(n)
    sum_q = np.zeros(n)
    total = 0.0
    draws = rng.random((T, 2))
    for u_row, u_col in draws:
        p = np.exp(log_p - log_p.max())
        p /= p.sum()
        q = np.exp(log_q - log_q.max())
        q /= q.sum()
        sum_p += p
        sum_q += q
        j = min(int(np.searchsorted(np.cumsum(q), u_col, side="right")), n - 1)
        i = min(int(np.searchsorted(np.cumsum(p), u_row, side="right")), n - 1)
        gain = view.query_col(j)[0]  # M[:, j]
        loss = view.query_row(i)[0]  # M[i, :]
        total += float(p @ gain)
        log_p += eta * gain
        log_q -= eta * loss
    return ZeroSumSolution(
        x=MixedStrategy.from_weights(sum_p), y=MixedStrategy.from_weights(sum_q), value=total / T
    )


def query_budget(n: int, eps: float, K: float = DEFAULT_QUERY_K) -> float:
    return K * n * math.log(max(n, 2)) / eps**2


@dataclass
class _Known:
    """Columns revealed so far, indexed like the full matrices (NaN = unknown)."""

    R: np.ndarray
    C: np.ndarray

    @classmethod
    def empty(cls, n: int) -> "_Known":
        return cls(np.full((n, n), np.nan), np.full((n, n), np.nan))

    def reveal_col(self, view, j: int) -> None:
        self.R[:, j], self.C[:, j] = view.query_col(j)


def _sampling_cost(n: int, eps: float) -> int:
    half = eps / 2
    T, t = mwu_rounds(n, half), sample_rounds(n, half)
    return 4 * n * T + 4 * n * t + 2 * n


def query_wsne(
    oracle, eps: float, seed=0, z: float | None = None, force_sampling: bool = False
) -> tuple[SolveOutcome, int]:
    """(0.6528 + eps)-WSNE from payoff queries; returns the outcome and query count."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    z = optimal_z() if z is None else z
    n = oracle.n
    start = oracle.count
    if n == 1 or (not force_sampling and _sampling_cost(n, eps) >= n * n):
        out = improved_wsne(oracle.query_all(), z)
        out.notes["mode"] = "enumerate"
        return out, oracle.count - start

    rng = np.random.default_rng(seed)
    half = eps / 2
    row = query_zero_sum(oracle, "row", half, rng, True)
    col = query_zero_sum(oracle, "col", half, rng, True)
    x_star, y_star, y_hat, x_hat = row.x, row.y, col.x, col.y
    est = estimate_payoff_vectors(oracle, Profile(x_hat, y_star), half, rng, force_sampling=True)
    v_r = float(x_star.probs @ est["row"].values)
    v_c = float(est["col"].values @ y_hat.probs)
    notes: dict[str, Any] = {"z": z, "v_r": v_r, "v_c": v_c, "mode": "sample"}

    swapped = v_c > v_r + TOL
    view = SwappedOracle(oracle) if swapped else oracle
    if swapped:
        x_star, y_star, x_hat, y_hat = y_hat, x_hat, y_star, x_star
        v_r, v_c = v_c, v_r
    notes["swapped"] = swapped
    thresh = TWO_THIRDS - z

    def done(profile: Profile, step: Step):
        prof = profile.swapped() if swapped else profile
        return SolveOutcome(prof, step, thresh + eps, "wsne", notes), oracle.count - start

    if v_r <= thresh + eps:
        return done(Profile(x_hat, y_star), Step.IMPROVED_STEP2)
    w = estimate_payoff_vectors(view, Profile(x_star, y_star), half, rng, ("col",), force_sampling=True)["col"]
    if w.values.max() <= thresh + eps:
        return done(Profile(x_star, y_star), Step.IMPROVED_STEP3)

    j_star = int(np.argmax(w.values))
    known = _Known.empty(n)
    known.reveal_col(view, j_star)
    notes["j_star"] = j_star
    try:
        split = split_step_four(known, x_star, j_star, z)
    except EmptyBError:
        return done(Profile(x_star, y_star), Step.IMPROVED_STEP3)
    pure_js = MixedStrategy.pure(n, j_star)
    w_B = estimate_payoff_vectors(view, Profile(split.x_B, y_star), half, rng, ("col",), force_sampling=True)["col"]
    at_js = float(split.x_B.probs[list(split.B)] @ known.C[list(split.B), j_star])
    if w_B.values.max() - at_js <= thresh + eps:
        return done(Profile(split.x_B, pure_js), Step.IMPROVED_STEP4)

    j_prime = int(np.argmax(w_B.values))
    known.reveal_col(view, j_prime)
    notes["j_prime"] = j_prime
    lo = ONE_THIRD + z
    for j in (j_star, j_prime):
        for i in x_star.support():
            if known.R[i, j] >= lo and known.C[i, j] >= lo:
                return done(Profile.pure(n, i, j), Step.IMPROVED_STEP5_PURE)
    try:
        b, s = find_matching_pennies_rows(known.R, known.C, split, j_prime, z)
    except NotFoundError:
        return done(Profile(split.x_B, pure_js), Step.IMPROVED_STEP5_FALLBACK)
    notes.update(b=b, s=s)
    return done(mp_profile(n, b, s, j_star, j_prime, z), Step.IMPROVED_STEP5_MP)
