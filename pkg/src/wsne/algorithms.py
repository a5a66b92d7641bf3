"""Well-supported equilibrium algorithms built on two independent zero-sum LPs.

* :func:`base_wsne` returns a 2/3-WSNE.
* :func:`improved_wsne` replaces the last step of the base algorithm with
  probability shifting and a matching-pennies search; with ``z = optimal_z()``
  it returns a 0.6528-WSNE.
* :func:`winlose_wsne` returns a 0.5-WSNE of a game with payoffs in {0, 1}.

All three solve (R, -R) and (-C, C), swap the players when the column
player's value is larger, and swap the result back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .game import (
    TOL,
    BimatrixGame,
    MixedStrategy,
    Profile,
    SolveOutcome,
    Step,
    is_pure_wsne,
    swap_players,
    verify,
)
from .zerosum import Relaxations, solve_relaxations

TWO_THIRDS = 2.0 / 3.0
ONE_THIRD = 1.0 / 3.0
Z_MAX = 1.0 / 24.0


class NotFoundError(LookupError):
    """A row the analysis guarantees to exist was not found (precondition breach)."""


class EmptyBError(ValueError):
    pass


class NotWinLoseError(ValueError):
    pass


class InvariantViolation(AssertionError):
    def __init__(self, check: str, message: str):
        super().__init__(f"{check}: {message}")
        self.check = check


# --- the trade-off parameter ----------------------------------------------


def cubic(z: float) -> float:
    return 117 * z**3 + 432 * z**2 - 30 * z + 1.0 / 3.0


def mp_quality(z: float) -> float:
    """Pure-strategy regret bound of the matching-pennies profile."""
    return 1.0 - (1 - 39 * z + 360 * z**2) / (2 - 33 * z - 117 * z**2)


def improved_bound(z: float) -> float:
    return max(TWO_THIRDS - z, mp_quality(z))


def optimal_z(tol: float = 1e-13) -> float:
    """Root of the cubic in [0, 1/24): the z balancing 2/3 - z against the MP bound."""
    lo, hi = 0.0, Z_MAX
    # cubic(0) = 1/3 > 0 and cubic(1/24) < 0, with a single sign change between
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if cubic(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimal_z_closed_form() -> float:
    """Trigonometric-method expression for the same root."""
    phi = math.atan(39.0 / 240073.0 * math.sqrt(9749) * math.sqrt(3)) / 3.0
    return (
        math.sqrt(3)
        / 117.0
        * (
            math.sqrt(2434) * math.sqrt(3) * math.cos(phi)
            - 3 * math.sqrt(2434) * math.sin(phi)
            - 48 * math.sqrt(3)
        )
    )


def _check_z(z: float) -> None:
    if not (0.0 <= z < Z_MAX):
        raise ValueError(f"z must lie in [0, 1/24), got {z}")


# --- shared pieces ----------------------------------------------------------


def _oriented(game: BimatrixGame, relax: Relaxations | None):
    """Solve (or reuse) the relaxations and apply the v_c <= v_r convention."""
    if relax is None:
        relax = solve_relaxations(game)
    if relax.v_c > relax.v_r + TOL:
        return swap_players(game), relax.swapped(), True
    return game, relax, False


def _finish(outcome: SolveOutcome, swapped: bool, relax: Relaxations) -> SolveOutcome:
    notes = dict(outcome.notes)
    notes.setdefault("v_r", relax.v_r)
    notes.setdefault("v_c", relax.v_c)
    notes["swapped"] = swapped
    out = SolveOutcome(outcome.profile, outcome.step, outcome.claimed_eps, outcome.measure, notes)
    return out.swapped() if swapped else out


def _trivial(game: BimatrixGame, measure: str = "wsne") -> SolveOutcome:
    return SolveOutcome(Profile.pure(1, 0, 0), Step.TRIVIAL, 0.0, measure)


def find_joint_high_row(
    game: BimatrixGame, x_star: MixedStrategy, j_star: int, thresh: float = ONE_THIRD
) -> int:
    """Smallest ``i`` in supp(x_star) with both R[i, j*] and C[i, j*] above ``thresh``.

    With ``thresh = 1/3`` this is the pure 2/3-WSNE row of the base algorithm;
    on a win-lose game ``thresh = 0.5`` asks for R[i, j*] = C[i, j*] = 1.
    """
    for i in x_star.support():
        if game.R[i, j_star] > thresh and game.C[i, j_star] > thresh:
            return i
    raise NotFoundError(f"no row of supp(x*) has both payoffs above {thresh} in column {j_star}")


# --- base algorithm ---------------------------------------------------------


def base_wsne(game: BimatrixGame, relax: Relaxations | None = None) -> SolveOutcome:
    if game.n == 1:
        return _trivial(game)
    g, r, swapped = _oriented(game, relax)
    bound = TWO_THIRDS
    if r.v_r <= bound + TOL:
        out = SolveOutcome(Profile(r.x_hat, r.y_star), Step.BASE_STEP2, bound)
    else:
        col_pay = r.x_star.probs @ g.C
        if col_pay.max() <= bound + TOL:
            out = SolveOutcome(Profile(r.x_star, r.y_star), Step.BASE_STEP3, bound)
        else:
            j_star = int(np.argmax(col_pay))
            i = find_joint_high_row(g, r.x_star, j_star, ONE_THIRD)
            out = SolveOutcome(Profile.pure(g.n, i, j_star), Step.BASE_STEP4, bound, notes={"j_star": j_star, "i": i})
    return _finish(out, swapped, r)


# --- improved algorithm -----------------------------------------------------


@dataclass(frozen=True)
class StepFourSplit:
    """supp(x*) cut by the row payoff in column j* at 1/3 + z."""

    j_star: int
    S: tuple[int, ...]
    B: tuple[int, ...]
    x_B: MixedStrategy
    pr_B: float
    pr_S: float
    x_S: MixedStrategy | None = None  # None when S is empty


def split_step_four(game: BimatrixGame, x_star: MixedStrategy, j_star: int, z: float) -> StepFourSplit:
    col = game.R[:, j_star]
    sup = x_star.support()
    S = tuple(i for i in sup if col[i] < ONE_THIRD + z)
    B = tuple(i for i in sup if col[i] >= ONE_THIRD + z)
    p = x_star.probs
    pr_B = float(p[list(B)].sum()) if B else 0.0
    pr_S = float(p[list(S)].sum()) if S else 0.0
    if not B:
        raise EmptyBError("every supported row has R[i, j*] < 1/3 + z")
    return StepFourSplit(j_star, S, B, _restrict(p, B), pr_B, pr_S, _restrict(p, S) if S else None)


def _restrict(p: np.ndarray, rows: tuple[int, ...]) -> MixedStrategy:
    w = np.zeros_like(p)
    w[list(rows)] = p[list(rows)]
    return MixedStrategy.from_weights(w)


def mp_weights(z: float) -> tuple[float, float]:
    """(weight on b / j*, weight on s / j')."""
    _check_z(z)
    d = 2 - 39 * z
    return (1 - 24 * z) / d, (1 - 15 * z) / d


def mp_profile(n: int, b: int, s: int, j_star: int, j_prime: int, z: float) -> Profile:
    wb, ws = mp_weights(z)
    x = np.zeros(n)
    y = np.zeros(n)
    x[b] += wb
    x[s] += ws
    y[j_star] += wb
    y[j_prime] += ws
    return Profile(MixedStrategy(x), MixedStrategy(y))


def b_threshold(z: float) -> float:
    return 1 - 18 * z / (1 + 3 * z)


def s_threshold(z: float) -> float:
    return 1 - 27 * z / (1 + 3 * z)


def find_matching_pennies_rows(
    R: np.ndarray, C: np.ndarray, split: StepFourSplit, j_prime: int, z: float
) -> tuple[int, int]:
    """Rows ``b`` in B and ``s`` in S forming the near-matching-pennies subgame.

    Only the payoffs of the supported rows in columns j* and j' are read, so
    callers holding partial knowledge of the game can pass those alone.
    """
    js = split.j_star
    tb, ts = b_threshold(z), s_threshold(z)
    b = next((i for i in split.B if R[i, js] > tb and C[i, j_prime] > tb), None)
    s = next((i for i in split.S if C[i, js] > ts and R[i, j_prime] > ts), None)
    if b is None or s is None:
        raise NotFoundError(f"matching-pennies rows missing (b={b}, s={s})")
    return b, s


def _step5_pure(game: BimatrixGame, support: list[int], j_star: int, j_prime: int, z: float):
    eps = TWO_THIRDS - z
    for j in (j_star, j_prime):
        for i in support:
            if is_pure_wsne(game, i, j, eps):
                return i, j
    return None


def improved_wsne(game: BimatrixGame, z: float | None = None, relax: Relaxations | None = None) -> SolveOutcome:
    """0.6528-WSNE (for the default ``z``); any ``z`` in [0, 1/24) is accepted."""
    if z is None:
        z = optimal_z()
    _check_z(z)
    if game.n == 1:
        return _trivial(game)
    g, r, swapped = _oriented(game, relax)
    eps = TWO_THIRDS - z
    notes: dict[str, Any] = {"z": z}

    if r.v_r <= eps + TOL:
        out = SolveOutcome(Profile(r.x_hat, r.y_star), Step.IMPROVED_STEP2, eps, notes=notes)
        return _finish(out, swapped, r)

    col_pay = r.x_star.probs @ g.C
    if col_pay.max() <= eps + TOL:
        out = SolveOutcome(Profile(r.x_star, r.y_star), Step.IMPROVED_STEP3, eps, notes=notes)
        return _finish(out, swapped, r)

    j_star = int(np.argmax(col_pay))
    split = split_step_four(g, r.x_star, j_star, z)
    notes["j_star"] = j_star
    pay_B = split.x_B.probs @ g.C
    # exact column pure-regret test; it subsumes (x_B^T C)_{j*} >= 1/3 + z
    if pay_B.max() - pay_B[j_star] <= eps + TOL:
        out = SolveOutcome(Profile(split.x_B, MixedStrategy.pure(g.n, j_star)), Step.IMPROVED_STEP4, eps, notes=notes)
        return _finish(out, swapped, r)

    j_prime = int(np.argmax(pay_B))
    notes["j_prime"] = j_prime
    pure = _step5_pure(g, r.x_star.support(), j_star, j_prime, z)
    if pure is not None:
        i, j = pure
        notes["i"] = i
        out = SolveOutcome(Profile.pure(g.n, i, j), Step.IMPROVED_STEP5_PURE, eps, notes=notes)
        return _finish(out, swapped, r)

    try:
        b, s = find_matching_pennies_rows(g.R, g.C, split, j_prime, z)
    except NotFoundError:
        candidates = [
            Profile(r.x_hat, r.y_star),
            Profile(r.x_star, r.y_star),
            Profile(split.x_B, MixedStrategy.pure(g.n, j_star)),
        ]
        regrets = [verify(g, p).max_pure_regret for p in candidates]
        k = int(np.argmin(regrets))
        notes["fallback_candidate"] = k
        out = SolveOutcome(candidates[k], Step.IMPROVED_STEP5_FALLBACK, regrets[k], notes=notes)
        return _finish(out, swapped, r)

    notes.update(b=b, s=s)
    out = SolveOutcome(mp_profile(g.n, b, s, j_star, j_prime, z), Step.IMPROVED_STEP5_MP, mp_quality(z), notes=notes)
    return _finish(out, swapped, r)


# --- win-lose games -----------------------------------------------------------


def winlose_wsne(game: BimatrixGame, relax: Relaxations | None = None) -> SolveOutcome:
    if not game.is_win_lose():
        raise NotWinLoseError("payoffs must all be exactly 0 or 1")
    if game.n == 1:
        return _trivial(game)
    g, r, swapped = _oriented(game, relax)
    if r.v_r <= 0.5 + TOL:
        out = SolveOutcome(Profile(r.x_hat, r.y_star), Step.WINLOSE_STEP2, 0.5)
    else:
        col_pay = r.x_star.probs @ g.C
        if col_pay.max() <= 0.5 + TOL:
            out = SolveOutcome(Profile(r.x_star, r.y_star), Step.WINLOSE_STEP3, 0.5)
        else:
            j_star = int(np.argmax(col_pay))
            i = find_joint_high_row(g, r.x_star, j_star, 0.5)
            out = SolveOutcome(Profile.pure(g.n, i, j_star), Step.WINLOSE_STEP4, 0.0, notes={"j_star": j_star, "i": i})
    return _finish(out, swapped, r)


# --- runtime-checkable proof invariants ----------------------------------------


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    value: float
    bound: float
    relation: str  # "<" or ">" or "<="
    passed: bool


@dataclass
class InvariantReport:
    checks: list[InvariantCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[InvariantCheck]:
        return [c for c in self.checks if not c.passed]


def check_step_five_bounds(
    game: BimatrixGame,
    x_star: MixedStrategy,
    split: StepFourSplit,
    j_prime: int,
    z: float,
    slack: float = 1e-7,
    raise_on_fail: bool = True,
) -> InvariantReport:
    """Evaluate every bound of the matching-pennies existence proof on an instance.

    Meant for instances where the improved algorithm reached the
    matching-pennies step.  Strict bounds are checked with ``slack`` toward
    passing.  The mass bounds for x_S are the ones the Markov argument
    yields: more than 2/3 of x_S on rows with C[i, j*] high and more than
    1/3 on rows with R[i, j'] high.
    """
    R, C = game.R, game.C
    js, jp = split.j_star, j_prime
    xB = split.x_B.probs
    if split.x_S is None:
        raise InvariantViolation("split", "S is empty; matching-pennies step unreachable")
    xS = split.x_S.probs
    d = 1 + 3 * z
    hi = (1 - 6 * z) / d
    tb, ts = b_threshold(z), s_threshold(z)
    pr_bound = (1 + 3 * z) / (2 - 3 * z)

    rep = InvariantReport()

    def gt(name, value, bound):
        rep.checks.append(InvariantCheck(name, float(value), float(bound), ">", value > bound - slack))

    def lt(name, value, bound, rel="<"):
        rep.checks.append(InvariantCheck(name, float(value), float(bound), rel, value < bound + slack))

    lt("s-mass", split.pr_S, pr_bound, "<=")
    lt("b-mass", split.pr_B, pr_bound, "<=")
    gt("b-row-jstar", xB @ R[:, js], hi)
    gt("s-col-jstar", xS @ C[:, js], hi)
    gt("b-col-jprime", xB @ C[:, jp], hi)
    lt("b-row-jprime-cap", xB @ R[:, jp], (1 + 33 * z + 9 * z**2) / (3 * d))
    gt("s-row-jprime", xS @ R[:, jp], (1 - 15 * z) / d)
    gt("b-high-row-jstar", xB[R[:, js] > tb].sum(), 0.5)
    gt("b-high-col-jprime", xB[C[:, jp] > tb].sum(), 0.5)
    gt("s-high-col-jstar", xS[C[:, js] > ts].sum(), TWO_THIRDS)
    gt("s-high-row-jprime", xS[R[:, jp] > ts].sum(), ONE_THIRD)

    if raise_on_fail and not rep.passed:
        f = rep.failures()[0]
        raise InvariantViolation(f.name, f"value {f.value:.12g} not {f.relation} bound {f.bound:.12g}")
    return rep
