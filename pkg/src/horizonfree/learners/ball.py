"""Online linear optimization over the unit l2 ball.

Losses are ``f_t(x) = w_t . x`` with ``||w_t|| <= 1``; ``W`` is the running
sum of the adversary's points.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import binom

from .base import BallLearner, HorizonExceeded, project_ball

_SERIES_WINDOW = 0.05
_SERIES_TERMS = 30


def fixed_horizon_point(W, r) -> np.ndarray:
    """Minimax point ``-W / sqrt(||W||^2 + r)`` with ``r`` rounds left (this one included)."""
    W = np.asarray(W, dtype=float)
    return -W / math.sqrt(float(W @ W) + r)


def ball_adaptive_coefficient(t: float, c: float) -> float:
    """``x_t = coef * W`` for the pretend horizon density ``t / T^2`` on ``[t, inf)``.

    With ``a = c - t`` the coefficient is ``-t * int_t^inf T^-2 (T + a)^-1/2 dT``,
    which is real-analytic in ``c``: an artanh form for ``c > t``, an arctan
    form for ``c < t``, and a power series in ``a / t`` near ``c = t`` where
    both closed forms cancel catastrophically.
    """
    t = float(t)
    c = float(c)
    if t <= 0 or c <= 0:
        raise ValueError("need t > 0 and c > 0")
    a = c - t
    if abs(a) <= _SERIES_WINDOW * t:
        n = np.arange(_SERIES_TERMS)
        terms = binom(-0.5, n) * (a / t) ** n / (n + 1.5)
        return -math.fsum(terms) / math.sqrt(t)
    if a > 0:
        return t * math.atanh(math.sqrt(a / c)) / a**1.5 - math.sqrt(c) / a
    b = -a
    return math.sqrt(c) / b - t * math.atan(math.sqrt(b / c)) / b**1.5


class BallMinimax(BallLearner):
    """Exact minimax play for a known horizon ``T``."""

    anytime = False
    name = "ball_minimax"

    def __init__(self, N: int, T: int):
        if T < 1:
            raise ValueError("horizon must be >= 1")
        self.T = int(T)
        super().__init__(N)

    def decide(self):
        if self.t > self.T:
            raise HorizonExceeded(f"round {self.t} is beyond horizon {self.T}")
        return fixed_horizon_point(self.M, self.T - self.t + 1)

    def describe(self):
        return {"name": self.name, "T": self.T}


class BallAdaptive(BallLearner):
    """Anytime ball learner: the minimax point averaged over a pretend ``1/T^2`` horizon."""

    name = "ball_adaptive"

    def decide(self):
        W = self.M
        c = 1.0 + float(W @ W)
        return project_ball(ball_adaptive_coefficient(self.t, c) * W)


class LastRoundBall(BallLearner):
    """Treats every round as the last one."""

    name = "last_round_ball"

    def decide(self):
        return fixed_horizon_point(self.M, 1)


class OGDBall(BallLearner):
    """Projected online gradient descent with step ``eta0 / sqrt(t)``."""

    name = "ogd_ball"

    def __init__(self, N: int, eta0: float = 2.0):
        if eta0 <= 0:
            raise ValueError("step scale must be positive")
        self.eta0 = float(eta0)
        super().__init__(N)

    def reset(self):
        super().reset()
        self.x = np.zeros(self.N)

    def decide(self):
        return self.x.copy()

    def update(self, z):
        z = np.asarray(z, dtype=float)
        eta = self.eta0 / math.sqrt(self.t)
        self.x = project_ball(self.x - eta * z)
        super().update(z)

    def describe(self):
        return {"name": self.name, "eta0": self.eta0}
