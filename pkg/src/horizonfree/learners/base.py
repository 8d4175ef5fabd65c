"""Common online-learner interface.

A learner is driven one round at a time: ``decide()`` returns the decision
for the current round (a distribution over actions for Hedge learners, a point
of the unit ball for ball learners) and ``update(z)`` reveals the round's loss
vector.  Decisions depend only on past losses and the learner's own RNG.
"""

from __future__ import annotations

import numpy as np

HEDGE = "hedge"
BALL = "ball"


class HorizonExceeded(RuntimeError):
    """A fixed-horizon learner was stepped past its horizon."""


def clean_distribution(P) -> np.ndarray:
    """Clamp tiny negatives and renormalize; reject anything not close to a distribution."""
    P = np.asarray(P, dtype=float)
    if np.any(P < -1e-9) or abs(P.sum() - 1.0) > 1e-7:
        raise ValueError(f"not a probability vector: {P}")
    P = np.where(P < 0.0, 0.0, P)
    return P / P.sum()


class Learner:
    setting = HEDGE
    randomized = False
    anytime = True
    name = "learner"

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("need at least one action")
        self.N = int(N)
        self.reset()

    def reset(self) -> None:
        self.t = 1
        self.M = np.zeros(self.N)

    @property
    def W(self) -> np.ndarray:
        """Running sum of the adversary's points (ball games)."""
        return self.M

    def decide(self) -> np.ndarray:
        raise NotImplementedError

    def update(self, z) -> None:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.N,):
            raise ValueError(f"loss vector must have shape ({self.N},)")
        self.M = self.M + z
        self.t += 1

    def seed(self, rng) -> None:
        """Attach an RNG stream; only randomized learners use it."""
        self.rng = np.random.default_rng(rng)

    def sample(self, rng) -> int:
        """Draw an action whose law is ``decide()``."""
        P = self.decide()
        u = rng.random()
        idx = int(np.searchsorted(np.cumsum(P), u, side="right"))
        return min(idx, self.N - 1)

    def describe(self) -> dict:
        return {"name": self.name}


class HedgeLearner(Learner):
    setting = HEDGE


class BallLearner(Learner):
    setting = BALL

    def sample(self, rng) -> int:
        raise TypeError("ball learners play points, not actions")


def project_ball(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = np.linalg.norm(x)
    return x / n if n > 1.0 else x
