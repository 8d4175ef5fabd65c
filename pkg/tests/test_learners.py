import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate
from scipy.special import gammaln

from horizonfree.arena import (
    Alternating,
    Bernoulli,
    RandomBall,
    RandomBasis,
    RandomHorizonBestResponse,
    RandomSphere,
    UniformCube,
    exhaustive_adversary_search,
    run_game,
)
from horizonfree.learners import (
    BallAdaptive,
    FixedMinimaxHedge,
    HorizonExceeded,
    ball_adaptive,
    ball_adaptive_coefficient,
    ball_minimax,
    density_eval,
    doubling_wrapper,
    exp_weights,
    first_order_exp_weights,
    fixed_minimax_hedge,
    fpl_pretend,
    last_round_heuristic,
    make_learner,
    ogd_ball,
    pretend_prior_hedge,
    pretend_two_action_drift,
    project_ball,
    radial_cdf,
    random_horizon_hedge,
    sample_action,
)
from horizonfree.priors import (
    FIRST_ORDER_D,
    FPL_D,
    PRETEND_HEDGE_D,
    BoundSpec,
    FinitePrior,
    eval_bound,
    exp_weights_optimal_b,
)
from horizonfree.solver import FiniteLossSpace, RandomHorizonSolver
from horizonfree.values import two_action_game_value


def drift_oracle(k: int, s: np.ndarray) -> np.ndarray:
    """P[s-k <= 2X < s+k] for X ~ Bin(s, 1/2), summed from log-gamma pmfs."""
    s = np.asarray(s, dtype=np.int64)
    x0 = -((k - s) // 2)  # ceil((s - k) / 2)
    out = np.zeros(s.shape)
    lg = gammaln(s + 1.0) - s * math.log(2.0)
    for j in range(k + 1):
        x = x0 + j
        ok = (2 * x < s + k) & (x >= 0) & (x <= s)
        xs = np.where(ok, x, 0)
        pmf = np.exp(lg - gammaln(xs + 1.0) - gammaln(s - xs + 1.0))
        out += np.where(ok, pmf, 0.0)
    return out


def play(learner, losses):
    out = []
    for z in losses:
        out.append(learner.decide())
        learner.update(z)
    return np.array(out)


# --- fixed and random horizon Hedge ----------------------------------------

def test_fixed_minimax_single_round():
    assert np.allclose(fixed_minimax_hedge(1).decide(), [0.5, 0.5])


def test_fixed_minimax_worst_case_is_game_value():
    reg, seq = exhaustive_adversary_search(fixed_minimax_hedge(6), FiniteLossSpace.basis(2), 6)
    assert reg == pytest.approx(two_action_game_value(6), abs=1e-12)
    assert len(seq) == 6


def test_fixed_minimax_horizon_enforced():
    h = fixed_minimax_hedge(2)
    h.update([1, 0])
    h.update([0, 1])
    with pytest.raises(HorizonExceeded):
        h.decide()


def test_fixed_minimax_random_basis_loss():
    # a basis-vector adversary picking uniformly makes every round cost 1/N in expectation
    N, T = 3, 50
    tot = np.mean([run_game(fixed_minimax_hedge(T, N), RandomBasis(N), T, seed=s).cum_loss[-1]
                   for s in range(200)])
    assert tot / T == pytest.approx(1 / N, abs=3 * math.sqrt(2 / 9 / (200 * T)) + 1e-3)


def test_random_horizon_point_mass():
    a = random_horizon_hedge(FinitePrior((5,), (1.0,)))
    b = fixed_minimax_hedge(5)
    losses = [[1, 0], [1, 0], [0, 1], [1, 0]]
    assert np.allclose(play(a, losses), play(b, losses), atol=1e-12)


def test_random_horizon_symmetric_start():
    assert np.allclose(random_horizon_hedge(FinitePrior.uniform(1, 7)).decide(), [0.5, 0.5])


def test_random_horizon_regret_against_best_response():
    space = FiniteLossSpace.basis(2)
    prior = FinitePrior((1, 2, 3), (1 / 3, 1 / 3, 1 / 3))
    tr = run_game(random_horizon_hedge(prior), RandomHorizonBestResponse(space, prior), 3)
    expected = float(np.dot(prior.probs, tr.regret))
    assert expected == pytest.approx(RandomHorizonSolver(space, prior).value(1, (0, 0)), abs=1e-9)
    assert expected == pytest.approx(np.mean([two_action_game_value(T) for T in (1, 2, 3)]), abs=1e-9)


# --- pretend-prior Hedge ----------------------------------------------------

@pytest.mark.parametrize("N", [2, 3, 4])
def test_pretend_hedge_uniform_start(N):
    assert np.allclose(pretend_prior_hedge(N=N).decide(), np.full(N, 1 / N))


def test_drift_oracle_matches_small_cases():
    from horizonfree.values import two_action_drift
    s = np.arange(0, 3000)
    for k in (1, 2, 5, 17):
        assert np.allclose(two_action_drift(k, s), drift_oracle(k, s), atol=1e-13)


@pytest.mark.parametrize("k,t", [(1, 1), (3, 5), (2, 40), (10, 7)])
def test_pretend_drift_brute_force(k, t):
    d = 2.35
    s = np.arange(0, 1_000_000)
    w = (t + s.astype(float)) ** -d
    body = math.fsum(w * drift_oracle(k, s))
    # beyond 1e6 the drift is k sqrt(2 / (pi s)) to leading order
    s0 = 1_000_000
    tail = k * math.sqrt(2 / math.pi) * (t + s0) ** (0.5 - d) / (d - 0.5)
    Z = float(mpmath.zeta(d, t))
    expect = (body + tail) / Z
    assert pretend_two_action_drift(k, t, d) == pytest.approx(expect, abs=1e-8)


def test_pretend_drift_antisymmetric_and_bounded():
    for k in (1, 4, 9):
        v = pretend_two_action_drift(k, 6, 2.35)
        assert 0 < v < 1
        assert pretend_two_action_drift(-k, 6, 2.35) == pytest.approx(-v, abs=1e-15)


def test_pretend_drift_large_d_is_last_round():
    # the prior concentrates on T = t, so the weights approach P^t, the last-round play
    assert pretend_two_action_drift(1, 10, 300.0) == pytest.approx(1.0, abs=1e-12)
    assert pretend_two_action_drift(2, 10, 300.0) == pytest.approx(0.5 * (1 + 1), abs=1e-12)


def test_pretend_hedge_regret_bound():
    T = 400
    bound = eval_bound(BoundSpec("pretend_hedge", PRETEND_HEDGE_D, 2), T) + 2.0
    worst = max(run_game(pretend_prior_hedge(), RandomBasis(2), T, seed=s).regret[-1] for s in range(2))
    worst = max(worst, run_game(pretend_prior_hedge(), Alternating(2), T).regret[-1])
    assert worst <= bound


def test_pretend_hedge_three_actions_is_a_distribution():
    h = pretend_prior_hedge(N=3)
    for z in np.eye(3)[[0, 1, 0, 2, 2, 1]]:
        P = h.decide()
        assert P.min() >= 0 and P.sum() == pytest.approx(1.0, abs=1e-12)
        h.update(z)


# --- ball game --------------------------------------------------------------

def test_ball_minimax_start_and_single_round():
    assert np.allclose(ball_minimax(5).decide(), 0.0)
    b = ball_minimax(1, N=3)
    assert np.allclose(b.decide(), 0.0)
    w = np.array([0.6, 0.0, 0.8])
    tr = run_game(ball_minimax(1, N=3), Alternating(3, [w], setting="ball"), 1)
    assert tr.regret[-1] == pytest.approx(np.linalg.norm(w))


def test_ball_minimax_regret_at_most_sqrt_T():
    for s in range(5):
        tr = run_game(ball_minimax(100), RandomBall(10), 100, seed=s)
        assert tr.regret[-1] <= math.sqrt(100) + 1e-9


def test_ball_adaptive_origin():
    assert np.allclose(ball_adaptive().decide(), 0.0)
    assert ball_adaptive_coefficient(1.0, 1.0) == pytest.approx(-2 / 3, rel=1e-14)


def coefficient_oracle(t, c):
    a = c - t
    f = lambda T: T**-2 * (T + a) ** -0.5
    return -t * float(mpmath.quad(f, [t, 2 * t, 10 * t, mpmath.inf]))


@pytest.mark.parametrize("t", [1, 2, 7, 30, 50])
@pytest.mark.parametrize("W", [0.0, 0.5, 1.0, 3.0, 7.0])
def test_ball_coefficient_quadrature(t, W):
    c = 1.0 + W * W
    assert ball_adaptive_coefficient(t, c) == pytest.approx(coefficient_oracle(t, c), abs=1e-10)


@pytest.mark.parametrize("t", [1.0, 10.0, 1000.0])
def test_ball_coefficient_continuity(t):
    at = ball_adaptive_coefficient(t, t)
    for c in (t * (1 - 1e-6), t * (1 + 1e-6), t * 0.949, t * 0.951, t * 1.049, t * 1.051):
        assert ball_adaptive_coefficient(t, c) == pytest.approx(coefficient_oracle(t, c), rel=1e-12)
    assert abs(ball_adaptive_coefficient(t, t + 1e-6) - at) <= 1e-5
    assert abs(ball_adaptive_coefficient(t, t - 1e-6) - at) <= 1e-5


def test_ball_adaptive_regret():
    T = 1000
    for s in range(2):
        tr = run_game(ball_adaptive(), RandomBall(10), T, seed=s)
        assert tr.regret[-1] <= math.pi * math.sqrt(T) + 10


def test_ogd():
    assert np.allclose(ogd_ball().decide(), 0.0)
    T = 1000
    tr = run_game(ogd_ball(), RandomSphere(10), T, seed=4)
    assert tr.regret[-1] <= 2 * math.sqrt(2 * T) + 5


def test_projection():
    x = np.array([1.2, -1.6])
    p = project_ball(x)
    assert np.linalg.norm(p) == pytest.approx(1.0)
    assert np.allclose(p * 2, x)
    assert np.array_equal(project_ball([0.3, 0.4]), [0.3, 0.4])


# --- doubling ---------------------------------------------------------------

def test_doubling_epochs():
    d = doubling_wrapper(lambda T: FixedMinimaxHedge(2, T), 2)
    for _ in range(20):
        d.decide()
        d.update([1.0, 0.0])
    assert d.epoch_starts == [1, 2, 4, 8, 16]


def test_doubling_never_exceeds_inner_horizon():
    d = make_learner({"name": "doubling", "base": "ball_minimax"}, 4)
    tr = run_game(d, RandomSphere(4), 300, seed=1)
    assert tr.T == 300


# --- exponential weights ----------------------------------------------------

@pytest.mark.parametrize("mode,kw", [("fixed", {"T": 10}), ("time_varying", {}), ("pretend", {})])
def test_exp_weights_uniform_start(mode, kw):
    assert np.allclose(exp_weights(3, mode, **kw).decide(), 1 / 3)


def test_exp_weights_pretend_brute_force():
    d, b, N = 4.0, 5.0, 3
    h = exp_weights(N, "pretend", d=d, b=b)
    for z in ([1, 0, 0.5], [0, 0.2, 1], [1, 1, 0], [0.3, 0, 0]):
        h.update(z)
    M, t = h.M, h.t
    T = np.arange(t, 2_000_000, dtype=float)
    w = T**-d
    eta = np.sqrt(b * math.log(N) / T)
    E = np.exp(-eta[:, None] * (M - M.min()))
    P = E / E.sum(axis=1, keepdims=True)
    expect = (w @ P) / w.sum()
    assert np.allclose(h.decide(), expect, atol=1e-8)


def test_exp_weights_converges_in_d():
    rng = np.random.default_rng(5)
    learners = {d: exp_weights(3, "pretend", d=d, b=8.0) for d in (5.0, 10.0, 50.0)}
    tv = exp_weights(3, "time_varying")
    for _ in range(25):
        ref = tv.decide()
        gaps = [np.abs(learners[d].decide() - ref).max() for d in (5.0, 10.0, 50.0)]
        assert gaps[0] >= gaps[1] >= gaps[2]
        z = rng.random(3)
        tv.update(z)
        for L in learners.values():
            L.update(z)


def test_exp_weights_regret_bound():
    T, N, d = 400, 4, 4.0
    bound = eval_bound(BoundSpec("exp_weights", d, N, exp_weights_optimal_b(d)), T) + 3.0
    tr = run_game(exp_weights(N, "pretend", d=d), UniformCube(N), T, seed=3)
    assert tr.regret[-1] <= bound


def test_exp_weights_rejects():
    with pytest.raises(ValueError):
        exp_weights(3, "fixed")
    with pytest.raises(ValueError):
        exp_weights(3, "bogus")


# --- first order ------------------------------------------------------------

def test_first_order_uniform_start():
    assert np.allclose(first_order_exp_weights(4).decide(), 0.25)


def test_first_order_quadrature_oracle():
    d = 2.5 + math.sqrt(2)
    h = first_order_exp_weights(2, d=d)
    for _ in range(3):
        h.update([1.0, 0.0])
    got = h.decide()
    lnN = math.log(2)
    mpmath.mp.dps = 30

    def p1(m):
        e = mpmath.sqrt(lnN / m)
        return mpmath.exp(-3 * e) / (mpmath.exp(-3 * e) + 1)

    dens = lambda m: (d - 1) * m ** (-d)
    w1 = mpmath.quad(lambda m: dens(m) * p1(m), [1, 10, 100, mpmath.inf])
    mpmath.mp.dps = 15
    assert got[0] == pytest.approx(float(w1), abs=1e-8)
    assert abs(h.normalization_error) < 1e-6


def test_first_order_regret_bound():
    T, N = 400, 4
    tr = run_game(first_order_exp_weights(N), Bernoulli(N, [0.1, 0.5, 0.5, 0.5]), T, seed=9)
    m_star = tr.comparator[-1]
    assert tr.regret[-1] <= eval_bound(BoundSpec("first_order", FIRST_ORDER_D, N), m_star) + 5.0


# --- follow the perturbed leader --------------------------------------------

def test_fpl_density_values():
    t, N, d = 5.0, 3, FPL_D
    from horizonfree.learners.fpl import perturbation_scale
    from horizonfree.priors import fpl_optimal_b
    delta = float(perturbation_scale(t, fpl_optimal_b(d), N))
    assert density_eval([0.1, -1e-9, 0.2], t) == 0.0
    inside = density_eval([0.1 * delta, 0.5 * delta, delta], t)
    assert inside == pytest.approx((d - 1) / ((d - 1 + N / 2) * delta**N), rel=1e-14)
    # radial CDF is the integral of the density over the cube of side r
    for r in (0.5 * delta, 2 * delta, 5 * delta):
        shell = integrate.quad(lambda u: N * u ** (N - 1) * float(density_eval(np.array([u, 0.0, 0.0]), t)),
                               0, r, points=[delta], limit=200)[0]
        assert radial_cdf(r, t, N) == pytest.approx(shell, rel=1e-8)
    assert radial_cdf(1e12 * delta, t, N) == pytest.approx(1.0, abs=1e-12)


def test_fpl_sample_frequencies():
    h = fpl_pretend(3, rng=0)
    for z in ([1, 0, 0], [0, 1, 0], [1, 0, 0], [0, 0, 1], [1, 0, 0]):
        h.update(z)
    P = h.averaged_weights()
    rng = np.random.default_rng(1)
    n = 100_000
    counts = np.bincount([h.sample(rng) for _ in range(n)], minlength=3)
    sd = np.sqrt(P * (1 - P) / n)
    assert np.all(np.abs(counts / n - P) <= 4 * sd)


def test_fpl_argmin_shift_invariance():
    h = fpl_pretend(4, rng=2)
    h.update([0.2, 0.9, 0.1, 0.5])
    rng = np.random.default_rng(3)
    for _ in range(100):
        xi, _ = h.draw_perturbation(rng)
        assert np.argmin(h.M + xi) == np.argmin(h.M + 17.5 + xi)


def test_fpl_decide_is_one_hot():
    P = fpl_pretend(3, rng=0).decide()
    assert sorted(P) == [0.0, 0.0, 1.0]


# --- last-round heuristics --------------------------------------------------

def test_last_round_hedge_regret():
    tr = run_game(last_round_heuristic("hedge"), Alternating(2), 20)
    assert tr.regret[-1] == pytest.approx(5.0, abs=1e-12)


def test_last_round_ball_regret():
    tr = run_game(last_round_heuristic("ball", N=2), Alternating(2, setting="ball"), 20)
    assert tr.regret[-1] == pytest.approx(5 * math.sqrt(2), abs=1e-12)


def test_last_round_hedge_symmetric():
    h = last_round_heuristic("hedge", N=3)
    assert np.allclose(h.decide(), 1 / 3)
    with pytest.raises(ValueError):
        last_round_heuristic("cube")


# --- sampling -----------------------------------------------------------------

def test_sample_degenerate():
    h = last_round_heuristic("hedge", N=3)
    h.update([0, 1, 1])
    rng = np.random.default_rng(0)
    assert {sample_action(h, rng) for _ in range(200)} == {0}


def test_pretend_hedge_sample_frequencies():
    h = pretend_prior_hedge()
    for z in ([1, 0], [1, 0], [0, 1], [1, 0]):
        h.update(z)
    p = h.decide()[0]
    rng = np.random.default_rng(6)
    n = 100_000
    freq = np.mean([sample_action(h, rng) == 0 for _ in range(n)])
    assert abs(freq - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_realized_vs_pseudo_regret():
    T, delta = 100, 0.01
    radius = math.sqrt(T / 2 * math.log(1 / delta))
    ok = 0
    for s in range(500):
        a = run_game(pretend_prior_hedge(), RandomBasis(2), T, seed=s)
        b = run_game(pretend_prior_hedge(), RandomBasis(2), T, seed=s, realized=True)
        assert np.array_equal(a.losses, b.losses)
        ok += abs(a.regret[-1] - b.regret[-1]) <= radius
    assert ok >= 0.99 * 500


# --- construction and invariants --------------------------------------------

@pytest.mark.parametrize("spec,cls", [("pretend_prior_hedge:d=3", "PretendPriorHedge"),
                                      ({"name": "ball_minimax", "T": 9, "id": "x"}, "BallMinimax"),
                                      ("exp_weights:mode=time_varying", "ExpWeights"),
                                      ("doubling:base=ball_minimax", "Doubling")])
def test_make_learner(spec, cls):
    assert type(make_learner(spec, 3)).__name__ == cls


@pytest.mark.parametrize("spec", ["nope", "ball_minimax:T", "ball_minimax:Q=3", {"T": 3}])
def test_make_learner_rejects(spec):
    with pytest.raises(ValueError):
        make_learner(spec, 3)


HEDGE_SPECS = ["pretend_prior_hedge", "last_round_hedge", "exp_weights:mode=time_varying",
               "exp_weights:d=4", "first_order_exp_weights", "fixed_minimax_hedge:T=12"]


@settings(max_examples=15)
@given(st.sampled_from(HEDGE_SPECS), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_hedge_outputs_are_distributions(spec, N, seed):
    h = make_learner(spec, N)
    rng = np.random.default_rng(seed)
    for _ in range(12):
        P = h.decide()
        assert P.min() >= -1e-12 and abs(P.sum() - 1) <= 1e-9
        h.update(rng.integers(0, 2, N).astype(float) if "hedge" in spec else rng.random(N))


@settings(max_examples=15)
@given(st.sampled_from(["ball_adaptive", "ogd_ball", "last_round_ball", "ball_minimax:T=30"]),
       st.integers(0, 2**32 - 1))
def test_ball_outputs_in_ball(spec, seed):
    b = make_learner(spec, 5)
    adv = RandomSphere(5)
    adv.reset(np.random.default_rng(seed))
    for t in range(1, 31):
        x = b.decide()
        assert np.linalg.norm(x) <= 1 + 1e-12
        b.update(adv.loss(t, x, b.M))


def test_anytime_learners_run_long():
    rng = np.random.default_rng(0)
    for L in (ball_adaptive(3), BallAdaptive(2)):
        for _ in range(3000):
            L.decide()
            L.update(project_ball(rng.normal(size=L.N)))
    h = pretend_prior_hedge()
    for _ in range(1500):
        h.decide()
        h.update(np.eye(2)[rng.integers(2)])
