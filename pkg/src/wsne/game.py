"""Bimatrix games, mixed strategies and the exact regret oracle."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

TOL = 1e-9
DUST = 1e-12


class DimensionError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BimatrixGame:
    """An n x n game with row payoffs ``R`` and column payoffs ``C`` in [0, 1]."""

    R: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        C = np.asarray(self.C, dtype=float)
        if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] == 0:
            raise DimensionError(f"R must be a non-empty square matrix, got shape {R.shape}")
        if C.shape != R.shape:
            raise DimensionError(f"R and C shapes differ: {R.shape} vs {C.shape}")
        for name, M in (("R", R), ("C", C)):
            if not np.all(np.isfinite(M)) or M.min() < 0.0 or M.max() > 1.0:
                raise ValueError(f"payoffs in {name} must lie in [0, 1]")
        object.__setattr__(self, "R", _frozen(R))
        object.__setattr__(self, "C", _frozen(C))

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def is_win_lose(self) -> bool:
        return bool(np.all((self.R == 0) | (self.R == 1)) and np.all((self.C == 0) | (self.C == 1)))

    def __eq__(self, other):
        if not isinstance(other, BimatrixGame):
            return NotImplemented
        return np.array_equal(self.R, other.R) and np.array_equal(self.C, other.C)

    def __repr__(self):
        return f"BimatrixGame(n={self.n})"


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """Probability vector over ``n`` pure strategies.

    Entries with magnitude below 1e-12 are clamped to zero and the vector is
    renormalized, so LP dust never shows up in the support.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise DimensionError("empty strategy")
        if not np.all(np.isfinite(p)):
            raise ValueError("strategy has non-finite entries")
        if p.min() < -DUST:
            raise ValueError(f"negative probability {p.min():.3g}")
        if abs(p.sum() - 1.0) > TOL:
            raise ValueError(f"probabilities sum to {p.sum():.12g}, not 1")
        p[np.abs(p) < DUST] = 0.0
        p = p / p.sum()
        object.__setattr__(self, "probs", _frozen(p))

    @classmethod
    def pure(cls, n: int, i: int) -> "MixedStrategy":
        p = np.zeros(n)
        p[i] = 1.0
        return cls(p)

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def from_weights(cls, w: Sequence[float]) -> "MixedStrategy":
        """Normalize nonnegative weights into a strategy."""
        w = np.clip(np.asarray(w, dtype=float), 0.0, None)
        s = w.sum()
        if s <= 0:
            raise ValueError("weights have zero mass")
        return cls(w / s)

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.probs > 0)]

    def is_pure(self) -> bool:
        return len(self.support()) == 1

    def __eq__(self, other):
        if not isinstance(other, MixedStrategy):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __repr__(self):
        sup = {i: round(float(self.probs[i]), 6) for i in self.support()}
        return f"MixedStrategy(n={self.n}, {sup})"


@dataclass(frozen=True)
class Profile:
    row: MixedStrategy
    col: MixedStrategy

    @classmethod
    def pure(cls, n: int, i: int, j: int) -> "Profile":
        return cls(MixedStrategy.pure(n, i), MixedStrategy.pure(n, j))

    def swapped(self) -> "Profile":
        return Profile(self.col, self.row)

    def to_dict(self) -> dict[str, Any]:
        return {"row": self.row.probs.tolist(), "col": self.col.probs.tolist()}


@dataclass(frozen=True)
class RegretReport:
    row_regret: float
    col_regret: float
    row_pure_regret: float
    col_pure_regret: float

    @property
    def max_regret(self) -> float:
        return max(self.row_regret, self.col_regret)

    @property
    def max_pure_regret(self) -> float:
        return max(self.row_pure_regret, self.col_pure_regret)

    def is_eps_ne(self, eps: float, tol: float = TOL) -> bool:
        return self.max_regret <= eps + tol

    def is_eps_wsne(self, eps: float, tol: float = TOL) -> bool:
        return self.max_pure_regret <= eps + tol

    def to_dict(self) -> dict[str, float]:
        return {
            "row_regret": self.row_regret,
            "col_regret": self.col_regret,
            "row_pure_regret": self.row_pure_regret,
            "col_pure_regret": self.col_pure_regret,
        }


class Step(str, enum.Enum):
    """Which branch of which algorithm produced a profile."""

    TRIVIAL = "Trivial"
    BASE_STEP2 = "Base.Step2"
    BASE_STEP3 = "Base.Step3"
    BASE_STEP4 = "Base.Step4"
    IMPROVED_STEP2 = "Improved.Step2"
    IMPROVED_STEP3 = "Improved.Step3"
    IMPROVED_STEP4 = "Improved.Step4Shift"
    IMPROVED_STEP5_PURE = "Improved.Step5Pure"
    IMPROVED_STEP5_MP = "Improved.Step5MP"
    IMPROVED_STEP5_FALLBACK = "Improved.Step5Fallback"
    WINLOSE_STEP2 = "WinLose.Step2"
    WINLOSE_STEP3 = "WinLose.Step3"
    WINLOSE_STEP4 = "WinLose.Step4"
    WINLOSE_FALLBACK = "WinLose.Fallback"
    APXNE_STEP1 = "ApxNE.Step1"
    APXNE_STEP2 = "ApxNE.Step2"


@dataclass(frozen=True)
class SolveOutcome:
    """A profile plus the branch that produced it and the guarantee it carries.

    ``measure`` is ``"wsne"`` when ``claimed_eps`` bounds pure-strategy regret
    and ``"ne"`` when it bounds ordinary regret.
    """

    profile: Profile
    step: Step
    claimed_eps: float
    measure: str = "wsne"
    notes: dict[str, Any] = field(default_factory=dict)

    def relevant_regret(self, report: RegretReport) -> float:
        return report.max_pure_regret if self.measure == "wsne" else report.max_regret

    def holds_on(self, game: BimatrixGame, tol: float = TOL) -> bool:
        return self.relevant_regret(verify(game, self.profile)) <= self.claimed_eps + tol

    def swapped(self) -> "SolveOutcome":
        return SolveOutcome(self.profile.swapped(), self.step, self.claimed_eps, self.measure, self.notes)


def _check_dims(game: BimatrixGame, profile: Profile) -> None:
    n = game.n
    if profile.row.n != n or profile.col.n != n:
        raise DimensionError(
            f"profile dimensions ({profile.row.n}, {profile.col.n}) do not match game n={n}"
        )


def payoff_vectors(game: BimatrixGame, profile: Profile) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(R @ y, x @ C)``: each player's payoff for every pure strategy."""
    _check_dims(game, profile)
    return game.R @ profile.col.probs, profile.row.probs @ game.C


def verify(game: BimatrixGame, profile: Profile) -> RegretReport:
    """Exact regret and pure-strategy regret of both players."""
    row_vec, col_vec = payoff_vectors(game, profile)
    x, y = profile.row, profile.col
    row_best, col_best = row_vec.max(), col_vec.max()
    row_regret = row_best - float(x.probs @ row_vec)
    col_regret = col_best - float(col_vec @ y.probs)
    row_pure = row_best - row_vec[x.support()].min()
    col_pure = col_best - col_vec[y.support()].min()
    # x @ v can exceed max(v) by an ulp
    return RegretReport(
        row_regret=float(max(row_regret, 0.0)),
        col_regret=float(max(col_regret, 0.0)),
        row_pure_regret=float(row_pure),
        col_pure_regret=float(col_pure),
    )


def swap_players(game: BimatrixGame) -> BimatrixGame:
    """The game seen from the other side: ``(C^T, R^T)``.

    A profile ``(x, y)`` of ``game`` corresponds to ``(y, x)`` of the result.
    """
    return BimatrixGame(game.C.T, game.R.T)


def best_response_row(game: BimatrixGame, y: MixedStrategy) -> int:
    """Smallest-index pure best response of the row player."""
    return int(np.argmax(game.R @ y.probs))


def best_response_col(game: BimatrixGame, x: MixedStrategy) -> int:
    """Smallest-index pure best response of the column player."""
    return int(np.argmax(x.probs @ game.C))


def is_pure_wsne(game: BimatrixGame, i: int, j: int, eps: float, tol: float = TOL) -> bool:
    return (game.R[:, j].max() - game.R[i, j] <= eps + tol) and (
        game.C[i, :].max() - game.C[i, j] <= eps + tol
    )


# --- text formats ---------------------------------------------------------


def _content_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        out.append(s)
    return out


def parse_game(text: str) -> BimatrixGame:
    """Parse the line format: ``n``, then n rows of R, then n rows of C."""
    lines = _content_lines(text)
    if not lines:
        raise ValueError("empty game file")
    try:
        n = int(lines[0])
    except ValueError as e:
        raise ValueError(f"first line must be an integer n, got {lines[0]!r}") from e
    if n < 1:
        raise ValueError("n must be positive")
    if len(lines) != 2 * n + 1:
        raise ValueError(f"expected {2 * n} matrix rows after n, got {len(lines) - 1}")
    rows = []
    for k, line in enumerate(lines[1:], start=1):
        vals = [float(tok) for tok in line.split()]
        if len(vals) != n:
            raise ValueError(f"matrix row {k} has {len(vals)} entries, expected {n}")
        rows.append(vals)
    return BimatrixGame(np.array(rows[:n]), np.array(rows[n:]))


def format_game(game: BimatrixGame) -> str:
    lines = [str(game.n)]
    for M in (game.R, game.C):
        for row in M:
            lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def load_game(path: str | Path) -> BimatrixGame:
    return parse_game(Path(path).read_text(encoding="utf-8"))


def save_game(game: BimatrixGame, path: str | Path) -> None:
    Path(path).write_text(format_game(game), encoding="utf-8")


def parse_profile(text: str, n: int | None = None) -> Profile:
    lines = _content_lines(text)
    if len(lines) != 2:
        raise ValueError("profile file must have exactly two lines (row, column)")
    x, y = ([float(t) for t in line.split()] for line in lines)
    if n is not None and (len(x) != n or len(y) != n):
        raise DimensionError(f"profile lengths ({len(x)}, {len(y)}) do not match n={n}")
    return Profile(MixedStrategy(x), MixedStrategy(y))


def format_profile(profile: Profile) -> str:
    return "\n".join(" ".join(repr(float(p)) for p in s.probs) for s in (profile.row, profile.col)) + "\n"


def game_from_lists(R: Iterable[Iterable[float]], C: Iterable[Iterable[float]]) -> BimatrixGame:
    return BimatrixGame(np.array(R, dtype=float), np.array(C, dtype=float))
