"""Hedge learners for the basis-vector loss space built from the minimax weights."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..priors import (
    PRETEND_HEDGE_D,
    DiscretePowerLaw,
    FinitePrior,
    conditional_pmf,
    lattice_tail_sum,
    sample_horizon,
)
from ..values import RandomWalkTable, default_table, two_action_drift, two_action_weights
from .base import HedgeLearner, HorizonExceeded, clean_distribution


def _is_two_action_integer(M) -> bool:
    return M.size == 2 and bool(np.all(M == np.round(M)))


def fixed_horizon_weights(M, rs, table: RandomWalkTable | None = None) -> np.ndarray:
    """Minimax weights ``P^T`` at ``M`` for each remaining-round count in ``rs``."""
    M = np.asarray(M, dtype=float)
    rs = np.atleast_1d(np.asarray(rs, dtype=np.int64))
    if _is_two_action_integer(M):
        return two_action_weights(M, rs)
    table = default_table() if table is None else table
    return np.array([table.weights(M, int(r)) for r in rs])


class FixedMinimaxHedge(HedgeLearner):
    """Minimax Hedge for a known horizon ``T``."""

    anytime = False
    name = "fixed_minimax_hedge"

    def __init__(self, N: int, T: int, table: RandomWalkTable | None = None):
        if T < 1:
            raise ValueError("horizon must be >= 1")
        self.T = int(T)
        self.table = table
        super().__init__(N)

    def decide(self):
        if self.t > self.T:
            raise HorizonExceeded(f"round {self.t} is beyond horizon {self.T}")
        return clean_distribution(fixed_horizon_weights(self.M, [self.T - self.t + 1], self.table)[0])

    def describe(self):
        return {"name": self.name, "T": self.T}


class RandomHorizonHedge(HedgeLearner):
    """Optimal learner when ``T`` is drawn from a known finite-support prior.

    Plays ``E[P^T_t | T >= t]``, the conditional average of fixed-horizon
    minimax weights.
    """

    anytime = False
    name = "random_horizon_hedge"

    def __init__(self, N: int, prior: FinitePrior, table: RandomWalkTable | None = None):
        if not isinstance(prior, FinitePrior):
            raise TypeError("random-horizon Hedge needs a finite-support prior")
        self.prior = prior
        self.table = table
        super().__init__(N)

    def decide(self):
        if self.t > self.prior.max_horizon:
            raise HorizonExceeded(f"round {self.t} is beyond the prior's support")
        T, w = conditional_pmf(self.prior, self.t)
        P = fixed_horizon_weights(self.M, T - self.t + 1, self.table)
        return clean_distribution(w @ P)

    def describe(self):
        return {"name": self.name, "support_max": self.prior.max_horizon}


_TAIL_TOL = 1e-9
_HEAD = 1024


@lru_cache(maxsize=1 << 16)
def pretend_two_action_drift(k: int, t: int, d: float) -> float:
    """``E[drift(k, T - t) | T >= t]`` under the discrete ``1/T^d`` prior.

    The first terms are summed exactly.  If the tail mass is not yet below
    ``1e-9`` of the total, the rest is summed by Euler-Maclaurin separately on
    the two parity classes of ``T - t``, on each of which the drift is a smooth
    function of real ``T``.  Weights are ``(T/t)^-d`` so large ``d`` is safe.
    """
    if k == 0:
        return 0.0
    S = DiscretePowerLaw(d).scaled_tail(t)
    # smallest K with sum_{T > K} (T/t)^-d <= tol * S (integral envelope)
    log_K = math.log(t) - math.log(_TAIL_TOL * S * (d - 1.0) / t) / (d - 1.0)
    n_exact = max(math.ceil(math.exp(min(log_K, 700.0))) - t + 1, 1)

    def weight(sv):
        return ((t + sv) / t) ** -d

    if n_exact <= _HEAD:
        s = np.arange(n_exact, dtype=float)
        return float(np.sum(weight(s) * two_action_drift(k, s)) / S)
    s = np.arange(_HEAD, dtype=float)
    body = float(np.sum(weight(s) * two_action_drift(k, s)))
    tail = 0.0
    for first in (_HEAD, _HEAD + 1):
        odd = (k + first) % 2 == 1

        def f(sv, odd=odd):
            sv = np.asarray(sv, dtype=float)
            return weight(sv) * two_action_drift(k, sv, odd=np.full(sv.shape, odd))

        tail += float(lattice_tail_sum(f, float(first), step=2.0, rtol=1e-9))
    return (body + tail) / S


class PretendPriorHedge(HedgeLearner):
    """Anytime Hedge that averages minimax weights over a pretend ``1/T^d`` horizon.

    For two actions the average is computed from the closed-form weights.  For
    more actions the exact weights come from the random-walk table, which
    limits the horizons that can be averaged: horizons more than
    ``horizon_cap`` rounds ahead are represented by the weights at the cap.
    """

    name = "pretend_prior_hedge"

    def __init__(self, N: int, d: float = PRETEND_HEDGE_D, horizon_cap: int = 128,
                 table: RandomWalkTable | None = None):
        self.prior = DiscretePowerLaw(d)
        self.d = float(d)
        self.horizon_cap = int(horizon_cap)
        self.table = table
        super().__init__(N)

    def decide(self):
        M = self.M
        if _is_two_action_integer(M):
            drift = pretend_two_action_drift(int(M[1] - M[0]), self.t, self.d)
            p1 = 0.5 * (1.0 + drift)
            return clean_distribution([p1, 1.0 - p1])
        return clean_distribution(self._capped_average())

    def _capped_average(self):
        t, d = self.t, self.d
        rs = np.arange(1, self.horizon_cap + 1)
        w = ((t + rs - 1.0) / t) ** -d
        P = fixed_horizon_weights(self.M, rs, self.table)
        far = t + self.horizon_cap
        tail = self.prior.scaled_tail(far) * (far / t) ** -d
        total = w @ P + tail * P[-1]
        return total / (w.sum() + tail)

    def sample(self, rng) -> int:
        """Two-stage draw: a pretend horizon ``T >= t``, then an action from ``P^T``."""
        if not _is_two_action_integer(self.M):
            return super().sample(rng)
        T = int(sample_horizon(self.prior, self.t, u=rng.random()))
        P = fixed_horizon_weights(self.M, [T - self.t + 1])[0]
        return int(rng.random() >= P[0])

    def describe(self):
        return {"name": self.name, "d": self.d}


class LastRoundHedge(HedgeLearner):
    """Treats every round as the last: plays ``minimax_weights(M, 1)``."""

    name = "last_round_hedge"

    def __init__(self, N: int, table: RandomWalkTable | None = None):
        self.table = table
        super().__init__(N)

    def decide(self):
        return clean_distribution(fixed_horizon_weights(self.M, [1], self.table)[0])
