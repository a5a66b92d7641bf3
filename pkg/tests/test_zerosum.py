import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import games, minimax_2x2, minimax_by_supports
from wsne.game import BimatrixGame
from wsne.zerosum import security_of, solve_relaxations, solve_zero_sum


@pytest.mark.parametrize("n", [2, 3])
def test_value_matches_support_enumeration(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(50):
        M = rng.random((n, n))
        sol = solve_zero_sum(M)
        want = minimax_2x2(M) if n == 2 else minimax_by_supports(M)
        assert sol.value == pytest.approx(want, abs=1e-7)
        assert security_of(sol.x, M) == pytest.approx(want, abs=1e-7)
        assert (M @ sol.y.probs).max() == pytest.approx(want, abs=1e-7)


def test_matching_pennies():
    sol = solve_zero_sum(np.eye(2))
    assert sol.value == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(sol.x.probs, 0.5) and np.allclose(sol.y.probs, 0.5)


def test_saddle_point_is_pure():
    M = np.array([[0.3, 0.9], [0.2, 0.1]])
    sol = solve_zero_sum(M)
    assert sol.value == pytest.approx(0.3)
    assert sol.x.support() == [0] and sol.y.support() == [0]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 2**31))
def test_simplex_agrees_with_highs(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.random((n, n))
    a, b = solve_zero_sum(M, "simplex"), solve_zero_sum(M, "highs")
    assert a.value == pytest.approx(b.value, abs=1e-9)


def test_degenerate_matrices():
    for M in (np.zeros((3, 3)), np.ones((4, 4)), np.eye(5), (np.arange(9).reshape(3, 3) % 2).astype(float)):
        sol = solve_zero_sum(M)
        assert security_of(sol.x, M) >= sol.value - 1e-9


@settings(max_examples=40, deadline=None)
@given(games())
def test_relaxation_security(g):
    r = solve_relaxations(g)
    assert (r.x_star.probs @ g.R).min() >= r.v_r - 1e-9
    assert (g.R @ r.y_star.probs).max() <= r.v_r + 1e-9
    assert (g.C @ r.y_hat.probs).min() >= r.v_c - 1e-9
    assert (r.x_hat.probs @ g.C).max() <= r.v_c + 1e-9


def test_swapped_relaxations_describe_swapped_game():
    rng = np.random.default_rng(3)
    g = BimatrixGame(rng.random((4, 4)), rng.random((4, 4)))
    s = solve_relaxations(g).swapped()
    h = solve_relaxations(BimatrixGame(g.C.T, g.R.T))
    assert s.v_r == pytest.approx(h.v_r, abs=1e-9) and s.v_c == pytest.approx(h.v_c, abs=1e-9)


def test_auto_backend_certifies_degenerate_win_lose():
    from wsne.harness import GeneratorSpec, generate
    from wsne.zerosum import SolverError

    simplex_failures = 0
    for g in generate(GeneratorSpec("winlose", n=50, seed=1050, count=60)):
        for M in (g.R, -g.C):
            sol = solve_zero_sum(M)
            assert security_of(sol.x, M) >= sol.value - 1e-7
            assert (M @ sol.y.probs).max() <= sol.value + 1e-7
            try:
                solve_zero_sum(M, "simplex")
            except SolverError:
                simplex_failures += 1
    # the fallback path is really exercised on this suite
    assert simplex_failures > 0


def test_unknown_backend():
    with pytest.raises(ValueError):
        solve_zero_sum(np.eye(2), "nope")
