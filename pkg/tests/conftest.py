import itertools

import numpy as np
from hypothesis import strategies as st

from wsne.game import BimatrixGame, MixedStrategy, Profile

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"AC{k} {'PASS' if ok else 'FAIL'}  {detail}")


# --- brute-force oracles -----------------------------------------------------


def brute_regrets(R, C, x, y):
    """Loop-by-loop regret and pure-strategy regret of both players."""
    n = len(x)
    row_pay = [sum(R[i][j] * y[j] for j in range(n)) for i in range(n)]
    col_pay = [sum(x[i] * C[i][j] for i in range(n)) for j in range(n)]
    row_exp = sum(x[i] * row_pay[i] for i in range(n))
    col_exp = sum(y[j] * col_pay[j] for j in range(n))
    rb, cb = max(row_pay), max(col_pay)
    rp = rb - min(row_pay[i] for i in range(n) if x[i] > 0)
    cp = cb - min(col_pay[j] for j in range(n) if y[j] > 0)
    return max(rb - row_exp, 0.0), max(cb - col_exp, 0.0), rp, cp


def minimax_2x2(M):
    """Closed-form value of the zero-sum 2x2 game (M, -M)."""
    (a, b), (c, d) = M
    lower = max(min(a, b), min(c, d))
    upper = min(max(a, c), max(b, d))
    if abs(lower - upper) < 1e-15:
        return lower
    return (a * d - b * c) / (a + d - b - c)


def minimax_by_supports(M):
    """Value of (M, -M) by enumerating equalizer strategies over all square supports."""
    M = np.asarray(M, dtype=float)
    n, m = M.shape
    best = -np.inf
    for k in range(1, min(n, m) + 1):
        for I in itertools.combinations(range(n), k):
            for J in itertools.combinations(range(m), k):
                # unknowns x_I (k) and v: x_I M[I, J] = v, sum x_I = 1
                A = np.zeros((k + 1, k + 1))
                A[:k, :k] = M[np.ix_(I, J)].T
                A[:k, k] = -1.0
                A[k, :k] = 1.0
                rhs = np.zeros(k + 1)
                rhs[k] = 1.0
                try:
                    sol = np.linalg.solve(A, rhs)
                except np.linalg.LinAlgError:
                    continue
                x = np.zeros(n)
                x[list(I)] = sol[:k]
                if x.min() < -1e-12:
                    continue
                best = max(best, float((x @ M).min()))
    return best


# --- hypothesis strategies -----------------------------------------------------


@st.composite
def games(draw, min_n=1, max_n=6, winlose=False):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    if winlose:
        return BimatrixGame((rng.random((n, n)) < 0.5) * 1.0, (rng.random((n, n)) < 0.5) * 1.0)
    return BimatrixGame(rng.random((n, n)), rng.random((n, n)))


def random_strategy(rng, n, sparse=True):
    w = rng.random(n)
    if sparse and n > 1:
        w[rng.random(n) < 0.4] = 0.0
        if w.sum() == 0:
            w[rng.integers(n)] = 1.0
    return MixedStrategy.from_weights(w)


def random_profile(rng, n):
    return Profile(random_strategy(rng, n), random_strategy(rng, n))
