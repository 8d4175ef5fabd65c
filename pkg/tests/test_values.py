import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from horizonfree.solver import ExactSolver, FiniteLossSpace
from horizonfree.values import (
    RandomWalkTable,
    StateBudgetExceeded,
    c_N,
    estimate_R,
    minimax_V,
    minimax_weights,
    random_walk_R,
    two_action_drift,
    two_action_game_value,
    two_action_weights,
)

from conftest import brute_force_R

small_M = st.lists(st.integers(0, 10), min_size=2, max_size=4)


def test_R_examples():
    assert random_walk_R((2, 1, 3), 0) == 1
    assert random_walk_R((0, 0), 1) == 0
    assert random_walk_R((0, 0), 3) == pytest.approx(0.75, abs=1e-12)


def test_V_examples():
    assert minimax_V((0, 0), 0) == 0
    assert minimax_V((0, 0), 3) == pytest.approx(0.75, abs=1e-12)
    assert minimax_V((0, 0), 4) == pytest.approx(0.75, abs=1e-12)


@pytest.mark.parametrize("M,r", [((0, 0), 5), ((0, 0, 0), 4), ((3, 0, 1), 5), ((0, 2, 2, 5), 4), ((1, 1), 7)])
def test_R_matches_enumeration(M, r):
    assert random_walk_R(M, r) == pytest.approx(brute_force_R(M, r), abs=1e-12)


@pytest.mark.parametrize("N,T", [(2, 5), (3, 4), (4, 3)])
def test_V_matches_lp_solver(N, T):
    # stage-game LPs over the basis loss space are an independent route to V
    assert minimax_V(np.zeros(N), T) == pytest.approx(ExactSolver(FiniteLossSpace.basis(N)).value(np.zeros(N), T), abs=1e-9)


def test_S_closed_form_rational():
    for T, want in [(1, Fraction(1, 2)), (2, Fraction(1, 2)), (4, Fraction(3, 4))]:
        assert two_action_game_value(T) == float(want)


def test_S_equals_recursion_up_to_16():
    for T in range(1, 17):
        assert two_action_game_value(T) == pytest.approx(minimax_V((0, 0), T), abs=1e-9)


@pytest.mark.parametrize("T", [63, 64, 65, 66, 1000, 10_001, 100_000])
def test_S_against_mpmath(T):
    want = mpmath.mpf(T) * mpmath.binomial(T - 1, T // 2) / mpmath.mpf(2) ** T
    assert two_action_game_value(T) == pytest.approx(float(want), rel=1e-11)


def test_S_asymptote():
    assert two_action_game_value(10_000) / math.sqrt(10_000 / (2 * math.pi)) == pytest.approx(1.0, rel=1e-3)


def test_weights_examples():
    np.testing.assert_allclose(minimax_weights((0, 0), 1), [0.5, 0.5])
    np.testing.assert_allclose(minimax_weights((5, 5), 2), [0.5, 0.5])
    P = minimax_weights((1, 1, 2), 1)
    assert P[0] == pytest.approx(P[1])


def test_weights_need_a_round():
    with pytest.raises(ValueError):
        minimax_weights((0, 0), 0)


def test_two_action_weights_match_table():
    for M in [(0, 0), (3, 1), (0, 4), (2, 9)]:
        for r in range(1, 12):
            np.testing.assert_allclose(two_action_weights(M, r), minimax_weights(M, r), atol=1e-12)


def test_drift_parity_continuation_is_smooth():
    s = np.linspace(10, 11, 5)
    a = two_action_drift(3, s, odd=np.ones(5, bool))
    assert np.all(np.diff(a) < 0)
    np.testing.assert_allclose(two_action_drift(3, np.array([10.0])), two_action_drift(3, np.array([10.0]), odd=True))


def test_c_N_values():
    assert c_N(2) == pytest.approx(0.58870, abs=1e-5)
    assert c_N(3) == pytest.approx(math.sqrt(4 * math.log(3)) / 3, abs=1e-15)
    assert c_N(4) == pytest.approx(math.sqrt(6 * math.log(4)) / 4, abs=1e-15)
    assert max(c_N(N) for N in range(2, 50)) == pytest.approx(0.72, abs=0.01)


def test_estimate_R():
    assert estimate_R((0, 0), 0, 10) == (0.0, 0.0)
    for M, r in [((0, 0), 3), ((0, 0, 0), 2)]:
        est, se = estimate_R(M, r, 100_000, seed=3)
        assert abs(est - random_walk_R(M, r)) <= 3 * se
    assert estimate_R((0, 1, 0), 5, 1000, seed=9) == estimate_R((0, 1, 0), 5, 1000, seed=9)


def test_state_budget():
    with pytest.raises(StateBudgetExceeded):
        random_walk_R(np.zeros(5), 12, table=RandomWalkTable(state_budget=20))


def test_bad_inputs():
    with pytest.raises(ValueError):
        random_walk_R((0,), 2)
    with pytest.raises(ValueError):
        minimax_V((0, 0), -1)
    with pytest.raises(ValueError):
        two_action_game_value(0)


@given(small_M, st.integers(0, 6), st.integers(-2, 5))
def test_shift_invariance(M, r, a):
    M = np.array(M, float)
    assert minimax_V(M, r) == pytest.approx(minimax_V(M - a, r) - a, abs=1e-9)


@given(small_M, st.integers(0, 6), st.data())
def test_monotone_in_M(M, r, data):
    M = np.array(M, float)
    i = data.draw(st.integers(0, M.size - 1))
    Mi = M.copy()
    Mi[i] += 1
    assert minimax_V(Mi, r) <= minimax_V(M, r) + 1e-12
    assert random_walk_R(Mi, r) >= random_walk_R(M, r) - 1e-12


@given(small_M, st.integers(1, 6))
def test_difference_bound(M, r):
    assert random_walk_R(M, r) - random_walk_R(M, r - 1) <= 1 / len(M) + 1e-12


@given(small_M, st.integers(1, 6))
def test_weights_valid(M, r):
    P = minimax_weights(M, r)
    assert np.all(P >= -1e-12)
    assert abs(P.sum() - 1) <= 1e-12


@given(small_M, st.integers(0, 6))
def test_monotone_in_r(M, r):
    assert minimax_V(M, r) <= minimax_V(M, r + 1) + 1e-12


@given(st.integers(2, 4), st.lists(st.integers(0, 3), max_size=4), st.lists(st.integers(0, 3), max_size=4),
       st.integers(0, 4))
def test_superadditivity_of_basis_multisets(N, a, b, r):
    M1 = np.bincount([i % N for i in a], minlength=N).astype(float)
    M2 = np.bincount([i % N for i in b], minlength=N).astype(float)
    assert minimax_V(M1 + M2, r) - minimax_V(M1, 0) <= minimax_V(M2, r) + 1e-12


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_value_upper_bound(N):
    for T in range(1, 21):
        assert minimax_V(np.zeros(N), T) <= c_N(N) * math.sqrt(T)
