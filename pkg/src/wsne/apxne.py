"""(3 - sqrt 5)/2-approximate Nash equilibrium by mixing the min-max strategy with a best response."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algorithms import _finish, _oriented, _trivial
from .game import TOL, BimatrixGame, MixedStrategy, Profile, SolveOutcome, Step
from .zerosum import Relaxations

THETA = (3.0 - math.sqrt(5.0)) / 2.0


def mix_bound(v_r: float) -> float:
    """Regret guaranteed by the mixed profile when x* secures ``v_r``."""
    return (1.0 - v_r) / (2.0 - v_r)


@dataclass(frozen=True)
class MixParams:
    v_r: float

    @property
    def alpha(self) -> float:
        return 1.0 / (2.0 - self.v_r)

    @property
    def beta(self) -> float:
        return (1.0 - self.v_r) / (2.0 - self.v_r)


def mix_with_response(x_star: MixedStrategy, r: int, v_r: float) -> MixedStrategy:
    m = MixParams(v_r)
    w = m.alpha * x_star.probs
    w[r] += m.beta
    return MixedStrategy.from_weights(w)


def apx_ne(game: BimatrixGame, relax: Relaxations | None = None) -> SolveOutcome:
    if game.n == 1:
        return _trivial(game, measure="ne")
    g, rx, swapped = _oriented(game, relax)
    v = rx.v_r
    if v <= THETA + TOL:
        out = SolveOutcome(Profile(rx.x_hat, rx.y_star), Step.APXNE_STEP1, THETA, "ne")
    else:
        j = int(np.argmax(rx.x_star.probs @ g.C))
        r = int(np.argmax(g.R[:, j]))
        x_mix = mix_with_response(rx.x_star, r, v)
        out = SolveOutcome(
            Profile(x_mix, MixedStrategy.pure(g.n, j)),
            Step.APXNE_STEP2,
            mix_bound(v),
            "ne",
            notes={"j": j, "r": r, "alpha": MixParams(v).alpha},
        )
    return _finish(out, swapped, rx)
