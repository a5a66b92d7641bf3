import numpy as np
import pytest
from hypothesis import given, settings

from conftest import games
from wsne.apxne import THETA, MixParams, apx_ne, mix_bound, mix_with_response
from wsne.game import BimatrixGame, MixedStrategy, Step, verify
from wsne.harness import fixture


def test_theta_is_the_balance_point():
    assert THETA == pytest.approx(0.3819660112501051)
    assert mix_bound(THETA) == pytest.approx(THETA, abs=1e-12)


def test_mix_weights():
    m = MixParams(0.5)
    assert m.alpha + m.beta == pytest.approx(1.0)
    x = mix_with_response(MixedStrategy([0.5, 0.5, 0.0]), 2, 0.5)
    assert x.probs[2] == pytest.approx(m.beta)


@settings(max_examples=100, deadline=None)
@given(games())
def test_regret_guarantee(g):
    out = apx_ne(g)
    assert out.measure == "ne"
    assert verify(g, out.profile).max_regret <= THETA + 1e-9
    assert out.holds_on(g)


def test_lower_bound_fixture_uses_mixing_branch():
    g = fixture("lb-base")
    out = apx_ne(g)
    assert out.step is Step.APXNE_STEP2
    assert verify(g, out.profile).max_regret <= mix_bound(2 / 3) + 1e-9


def test_matching_pennies_first_branch():
    g = fixture("matching-pennies")
    out = apx_ne(g)
    # value 1/2 > theta, so the mixing branch runs; its claim is (1 - v)/(2 - v)
    assert out.claimed_eps == pytest.approx(1 / 3)
    assert out.holds_on(g)


def test_low_value_uses_first_branch():
    R = np.array([[0.0, 0.3], [0.3, 0.0]])
    out = apx_ne(BimatrixGame(R, R.T))
    assert out.step is Step.APXNE_STEP1
