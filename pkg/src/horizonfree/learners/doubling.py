"""Doubling trick: restart a fixed-horizon learner with horizons T0, 2 T0, 4 T0, ..."""

from __future__ import annotations

from typing import Callable

from .base import BALL, HEDGE, Learner


class Doubling(Learner):
    """Runs ``factory(T)`` for successive epochs of length ``T0 * 2^k``.

    The inner learner only ever sees its own epoch's losses and is never stepped
    past its horizon.
    """

    name = "doubling"

    def __init__(self, N: int, factory: Callable[[int], Learner], T0: int = 1,
                 base_name: str = "base"):
        if T0 < 1:
            raise ValueError("initial horizon guess must be >= 1")
        self.factory = factory
        self.T0 = int(T0)
        self.base_name = base_name
        probe = factory(self.T0)
        self.setting = probe.setting
        self.randomized = probe.randomized
        super().__init__(N)

    def reset(self):
        super().reset()
        self.epoch = 0
        self.epoch_len = self.T0
        self.epoch_round = 0
        self.epoch_starts = [1]
        self.inner = self.factory(self.epoch_len)

    def decide(self):
        return self.inner.decide()

    def sample(self, rng):
        return self.inner.sample(rng)

    def update(self, z):
        self.inner.update(z)
        super().update(z)
        self.epoch_round += 1
        if self.epoch_round == self.epoch_len:
            self.epoch += 1
            self.epoch_len *= 2
            self.epoch_round = 0
            self.epoch_starts.append(self.t)
            self.inner = self.factory(self.epoch_len)

    def describe(self):
        return {"name": self.name, "base": self.base_name, "T0": self.T0}


__all__ = ["Doubling", "HEDGE", "BALL"]
