import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import games
from wsne.algorithms import (
    ONE_THIRD,
    TWO_THIRDS,
    InvariantViolation,
    NotWinLoseError,
    base_wsne,
    check_step_five_bounds,
    cubic,
    find_matching_pennies_rows,
    improved_bound,
    improved_wsne,
    mp_profile,
    mp_quality,
    mp_weights,
    optimal_z,
    optimal_z_closed_form,
    split_step_four,
    winlose_wsne,
)
from wsne.game import BimatrixGame, Step, swap_players, verify
from wsne.harness import fixture, planted_game
from wsne.zerosum import solve_relaxations


def test_optimal_z_constant():
    z = optimal_z()
    assert z == pytest.approx(0.013906376, abs=1e-8)
    assert abs(cubic(z)) <= 1e-9
    assert z == pytest.approx(optimal_z_closed_form(), abs=1e-10)
    assert 0.6527 <= TWO_THIRDS - z <= 0.6528


def test_tradeoff_balances_at_optimum():
    z = optimal_z()
    assert mp_quality(z) == pytest.approx(TWO_THIRDS - z, abs=1e-10)
    grid = np.linspace(0, 1 / 24 - 1e-6, 400)
    assert min(improved_bound(t) for t in grid) >= improved_bound(z) - 1e-9


def test_mp_weights():
    p, q = mp_weights(0.0)
    assert p == pytest.approx(0.5) and q == pytest.approx(0.5)
    z = optimal_z()
    p, q = mp_weights(z)
    assert p + q == pytest.approx(1.0)
    assert p == pytest.approx((1 - 24 * z) / (2 - 39 * z))


def test_lower_bound_fixture_base():
    out = base_wsne(fixture("lb-base"))
    assert out.step is Step.BASE_STEP2
    assert verify(fixture("lb-base"), out.profile).col_pure_regret == pytest.approx(TWO_THIRDS, abs=1e-12)


def test_lower_bound_fixture_improved():
    g = fixture("lb-improved")
    out = improved_wsne(g)
    assert out.step is Step.IMPROVED_STEP2
    assert verify(g, out.profile).max_pure_regret == pytest.approx(TWO_THIRDS - optimal_z(), abs=1e-9)


def test_literal_rounded_fixture_skips_first_branch():
    # the rounded payoff 0.6528 sits just above the threshold 2/3 - z
    g = fixture("lb-improved-literal")
    out = improved_wsne(g)
    assert out.step is not Step.IMPROVED_STEP2
    assert out.holds_on(g)


def test_planted_instance_reaches_matching_pennies():
    g = fixture("planted-mp")
    out = improved_wsne(g)
    assert out.step is Step.IMPROVED_STEP5_MP
    assert out.holds_on(g)
    assert verify(g, out.profile).max_pure_regret <= mp_quality(optimal_z()) + 1e-9


def test_planted_generator_always_reaches_step_five():
    rng = np.random.default_rng(5)
    for _ in range(20):
        g = planted_game(int(rng.integers(4, 12)), rng)
        out = improved_wsne(g)
        assert out.step is Step.IMPROVED_STEP5_MP
        r = solve_relaxations(g)
        gg, rr = (g, r) if not out.notes["swapped"] else (swap_players(g), r.swapped())
        split = split_step_four(gg, rr.x_star, out.notes["j_star"], optimal_z())
        assert check_step_five_bounds(gg, rr.x_star, split, out.notes["j_prime"], optimal_z()).passed


def test_invariant_checker_flags_broken_instance():
    g = fixture("planted-mp")
    r = solve_relaxations(g)
    split = split_step_four(g, r.x_star, 0, optimal_z())
    # column 2 is not the deviation the run would pick; the bounds must fail
    with pytest.raises(InvariantViolation):
        check_step_five_bounds(g, r.x_star, split, 2, optimal_z())


def test_mp_profile_regret_formula():
    z = optimal_z()
    g = fixture("planted-mp")
    prof = mp_profile(4, 0, 1, 0, 1, z)
    assert verify(g, prof).max_pure_regret <= 1 - (1 - 39 * z + 360 * z * z) / (2 - 33 * z - 117 * z * z) + 1e-9


def test_find_matching_pennies_reads_only_two_columns():
    g = fixture("planted-mp")
    r = solve_relaxations(g)
    z = optimal_z()
    split = split_step_four(g, r.x_star, 0, z)
    R = np.full((4, 4), np.nan)
    C = np.full((4, 4), np.nan)
    R[:, [0, 1]], C[:, [0, 1]] = g.R[:, [0, 1]], g.C[:, [0, 1]]
    assert find_matching_pennies_rows(R, C, split, 1, z) == find_matching_pennies_rows(g.R, g.C, split, 1, z)


@settings(max_examples=80, deadline=None)
@given(games())
def test_base_guarantee(g):
    out = base_wsne(g)
    assert verify(g, out.profile).max_pure_regret <= TWO_THIRDS + 1e-9
    assert out.holds_on(g)


@settings(max_examples=80, deadline=None)
@given(games())
def test_improved_guarantee(g):
    out = improved_wsne(g)
    assert verify(g, out.profile).max_pure_regret <= TWO_THIRDS - optimal_z() + 1e-9
    assert out.holds_on(g)


@settings(max_examples=80, deadline=None)
@given(games(winlose=True))
def test_winlose_guarantee(g):
    out = winlose_wsne(g)
    assert verify(g, out.profile).max_pure_regret <= 0.5 + 1e-9
    if out.step is Step.WINLOSE_STEP4:
        assert out.profile.row.is_pure() and out.profile.col.is_pure()
        assert verify(g, out.profile).max_pure_regret == 0.0


def test_winlose_rejects_fractional_payoffs():
    with pytest.raises(NotWinLoseError):
        winlose_wsne(fixture("lb-base"))


@pytest.mark.parametrize("z", [0.0, 0.01, 0.03, 1 / 24 - 1e-9])
def test_any_z_meets_its_own_bound(z):
    rng = np.random.default_rng(int(z * 1e6))
    for _ in range(50):
        n = int(rng.integers(2, 8))
        g = BimatrixGame(rng.random((n, n)), rng.random((n, n)))
        out = improved_wsne(g, z)
        assert verify(g, out.profile).max_pure_regret <= improved_bound(z) + 1e-9


@pytest.mark.parametrize("z", [-0.01, 1 / 24, 0.5])
def test_rejects_bad_z(z):
    with pytest.raises(ValueError):
        improved_wsne(fixture("lb-base"), z)


def test_one_by_one_game_is_trivial():
    g = BimatrixGame(np.array([[0.4]]), np.array([[0.9]]))
    for alg in (base_wsne, improved_wsne):
        out = alg(g)
        assert out.step is Step.TRIVIAL and verify(g, out.profile).max_pure_regret == 0.0


@settings(max_examples=40, deadline=None)
@given(games(min_n=2))
def test_swap_symmetry_of_guarantee(g):
    a, b = improved_wsne(g), improved_wsne(swap_players(g))
    bound = TWO_THIRDS - optimal_z() + 1e-9
    assert verify(g, a.profile).max_pure_regret <= bound
    assert verify(swap_players(g), b.profile).max_pure_regret <= bound


def test_split_thresholds():
    g = fixture("planted-mp")
    r = solve_relaxations(g)
    split = split_step_four(g, r.x_star, 0, optimal_z())
    assert all(g.R[i, 0] >= ONE_THIRD + optimal_z() for i in split.B)
    assert all(g.R[i, 0] < ONE_THIRD + optimal_z() for i in split.S)
    assert math.isclose(split.pr_B + split.pr_S, 1.0)
