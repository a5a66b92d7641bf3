import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import games, random_profile
from wsne.algorithms import optimal_z
from wsne.game import BimatrixGame, MixedStrategy, Profile, Step, payoff_vectors, verify
from wsne.harness import fixture
from wsne.query import (
    PayoffOracle,
    SwappedOracle,
    estimate_payoff_vectors,
    mwu_rounds,
    query_budget,
    query_wsne,
    query_zero_sum,
    sample_rounds,
)
from wsne.zerosum import solve_zero_sum

BOUND = 2 / 3 - optimal_z()


def _game(n, seed):
    rng = np.random.default_rng(seed)
    return BimatrixGame(rng.random((n, n)), rng.random((n, n)))


def test_oracle_counts_each_reveal():
    g = _game(5, 0)
    o = PayoffOracle(g, keep_log=True)
    assert o.query(1, 2) == (g.R[1, 2], g.C[1, 2])
    o.query_col(0)
    o.query_row(3)
    assert o.count == 1 + 5 + 5 == len(o.log)
    lines = o.log_csv().splitlines()
    assert lines[0].split(",")[:2] == ["1", "2"]
    assert float(lines[0].split(",")[2]) == g.R[1, 2]


def test_log_export_needs_flag():
    with pytest.raises(RuntimeError):
        PayoffOracle(_game(2, 0)).log_csv()


def test_swapped_oracle_shares_the_count():
    g = _game(4, 1)
    o = PayoffOracle(g)
    s = SwappedOracle(o)
    r, c = s.query(0, 3)
    assert (r, c) == (g.C[3, 0], g.R[3, 0])
    col_r, _ = s.query_col(2)
    assert np.array_equal(col_r, g.C[2, :])
    assert o.count == s.count == 5


def test_pure_column_gives_exact_vector():
    g = _game(30, 2)
    prof = Profile(MixedStrategy.uniform(30), MixedStrategy.pure(30, 7))
    o = PayoffOracle(g)
    v = estimate_payoff_vectors(o, prof, 0.15, 0, ("row",), force_sampling=True)["row"]
    assert np.allclose(v.values, g.R[:, 7])
    assert o.count == 30 * sample_rounds(30, 0.15)


def test_estimates_are_close_and_within_budget():
    n, eps = 30, 0.15
    hits = 0
    for seed in range(100):
        g = _game(n, 1000 + seed)
        prof = random_profile(np.random.default_rng(seed), n)
        o = PayoffOracle(g)
        est = estimate_payoff_vectors(o, prof, eps, seed, force_sampling=True)
        row, col = payoff_vectors(g, prof)
        dev = max(np.abs(est["row"].values - row).max(), np.abs(est["col"].values - col).max())
        hits += dev <= eps
        assert o.count <= 2 * n * math.ceil(2 * math.log(n) / eps**2)
    assert hits >= 95


def test_small_game_enumerates():
    g = _game(2, 3)
    o = PayoffOracle(g)
    est = estimate_payoff_vectors(o, Profile.pure(2, 0, 1), 0.1)
    assert est["row"].exact and o.count == 4


def test_mwu_matching_pennies():
    o = PayoffOracle(BimatrixGame(np.eye(2), 1 - np.eye(2)))
    sol = query_zero_sum(o, "row", 0.1, 0, force_sampling=True)
    assert abs(sol.value - 0.5) <= 0.1
    assert o.count == 2 * 2 * mwu_rounds(2, 0.1)


def test_mwu_solutions_are_approximate_equilibria():
    n, eps, good = 40, 0.15, 0
    for seed in range(50):
        g = _game(n, 2000 + seed)
        o = PayoffOracle(g)
        sol = query_zero_sum(o, "row", eps, seed, force_sampling=True)
        exact = solve_zero_sum(g.R).value
        row_reg = (g.R @ sol.y.probs).max() - exact
        col_reg = exact - (sol.x.probs @ g.R).min()
        good += max(row_reg, col_reg) <= eps
        assert o.count <= 2 * n * mwu_rounds(n, eps)
    assert good >= 45


def test_column_side_solves_column_game():
    g = _game(6, 4)
    sol = query_zero_sum(PayoffOracle(g), "col", 0.2)
    assert sol.value == pytest.approx(solve_zero_sum(g.C.T).value, abs=1e-9)


def test_lower_bound_fixture_first_branch_when_sampling():
    g = fixture("lb-base")
    out, q = query_wsne(PayoffOracle(g), 0.1, force_sampling=True)
    assert out.step is Step.IMPROVED_STEP2
    assert verify(g, out.profile).max_pure_regret <= BOUND + 0.1 + 1e-9


def test_tiny_game_enumerates_and_runs_exactly():
    g = fixture("lb-base")
    out, q = query_wsne(PayoffOracle(g), 0.1)
    assert q == 4 and out.notes["mode"] == "enumerate"
    assert verify(g, out.profile).max_pure_regret <= BOUND + 1e-9


def test_counts_are_exact_in_sampling_mode():
    g = _game(12, 5)
    o = PayoffOracle(g, keep_log=True)
    out, q = query_wsne(o, 0.3, 1, force_sampling=True)
    assert q == o.count == len(o.log)
    assert q <= query_budget(12, 0.3)


def test_sampling_mode_reaches_matching_pennies_on_planted_game():
    g = fixture("planted-mp")
    out, q = query_wsne(PayoffOracle(g), 0.02, 0, force_sampling=True)
    assert out.notes["mode"] == "sample"
    assert verify(g, out.profile).max_pure_regret <= BOUND + 0.02


@settings(max_examples=30, deadline=None)
@given(games(min_n=1, max_n=8), st.integers(0, 1000))
def test_enumeration_mode_is_exact(g, seed):
    out, q = query_wsne(PayoffOracle(g), 0.1, seed)
    assert q == g.n * g.n
    assert verify(g, out.profile).max_pure_regret <= BOUND + 1e-9


def test_deterministic_under_seed():
    g = _game(10, 6)
    a, qa = query_wsne(PayoffOracle(g), 0.3, 4, force_sampling=True)
    b, qb = query_wsne(PayoffOracle(g), 0.3, 4, force_sampling=True)
    assert qa == qb and a.profile.row == b.profile.row and a.profile.col == b.profile.col
