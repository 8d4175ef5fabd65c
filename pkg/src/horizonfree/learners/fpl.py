"""Follow the perturbed leader with a pretend-horizon perturbation."""

from __future__ import annotations

import math

import numpy as np

from ..priors import FPL_D, ContinuousPowerLaw, conditional_expectation, fpl_optimal_b, sample_horizon
from .base import HedgeLearner

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def perturbation_scale(t, b: float, N: int):
    """``Delta_t = sqrt(b t N)``: side of the uniform cube at pretend horizon ``t``."""
    return np.sqrt(b * np.asarray(t, dtype=float) * N)


def density_eval(xi, t: float, d: float = FPL_D, b: float | None = None) -> np.ndarray:
    """Marginal density of the round-``t`` perturbation at ``xi`` (last axis = actions)."""
    xi = np.asarray(xi, dtype=float)
    N = xi.shape[-1]
    b = fpl_optimal_b(d) if b is None else b
    delta = perturbation_scale(t, b, N)
    norm = (d - 1.0) / (d - 1.0 + N / 2.0) * delta ** (-float(N))
    sup = xi.max(axis=-1)
    with np.errstate(divide="ignore"):
        ratio = np.where(sup > delta, (delta / np.maximum(sup, 1e-300)) ** (2.0 * d - 2.0 + N), 1.0)
    return np.where(xi.min(axis=-1) < 0.0, 0.0, norm * ratio)


def radial_cdf(r, t: float, N: int, d: float = FPL_D, b: float | None = None):
    """``Pr[||xi||_inf <= r]`` under the round-``t`` perturbation density."""
    b = fpl_optimal_b(d) if b is None else b
    delta = perturbation_scale(t, b, N)
    r = np.asarray(r, dtype=float)
    inner = (d - 1.0) / (d - 1.0 + N / 2.0)
    outer = (N / 2.0) / (d - 1.0 + N / 2.0)
    x = np.maximum(r, 0.0) / delta
    with np.errstate(divide="ignore"):
        far = inner + outer * (1.0 - np.minimum(1.0, 1.0 / np.maximum(x, 1e-300)) ** (2.0 * d - 2.0))
    return np.where(x <= 1.0, inner * x**N, far)


def uniform_cube_leader_probs(M, delta: float) -> np.ndarray:
    """``Pr[argmin_i M_i + U_i = i]`` for ``U`` uniform on ``[0, delta]^N``."""
    M = np.asarray(M, dtype=float)
    N = M.size
    P = np.empty(N)
    for i in range(N):
        gap = M[i] - np.delete(M, i)  # action i beats j when u + gap < U_j
        cuts = np.concatenate([[0.0, delta], -gap, delta - gap])
        cuts = np.unique(np.clip(cuts, 0.0, delta))
        total = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi <= lo:
                continue
            u = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
            surv = np.clip(1.0 - (u[:, None] + gap[None, :]) / delta, 0.0, 1.0).prod(axis=1)
            total += 0.5 * (hi - lo) * (_GL_WEIGHTS @ surv)
        P[i] = total / delta
    return P


class FPLPretend(HedgeLearner):
    """Perturbed leader whose noise is uniform on ``[0, Delta_T]^N`` at a pretend horizon.

    Each round draws ``T >= t`` from the continuous ``1/T^d`` prior and then
    ``xi`` uniformly from the cube, and plays ``argmin(M + xi)``.  ``decide``
    returns the one-hot vector of a fresh draw from the learner's own RNG, an
    unbiased estimate of the exact averaged distribution given by
    :meth:`averaged_weights`.
    """

    randomized = True
    name = "fpl_pretend"

    def __init__(self, N: int, d: float = FPL_D, b: float | None = None, rng=None):
        self.d = float(d)
        self.b = fpl_optimal_b(self.d) if b is None else float(b)
        if self.b <= 0:
            raise ValueError("b must be positive")
        self.prior = ContinuousPowerLaw(self.d)
        self.rng = np.random.default_rng(rng)
        super().__init__(N)

    def draw_perturbation(self, rng):
        T = float(sample_horizon(self.prior, float(self.t), u=rng.random()))
        xi = perturbation_scale(T, self.b, self.N) * rng.random(self.N)
        return xi, T

    def sample(self, rng) -> int:
        xi, _ = self.draw_perturbation(rng)
        return int(np.argmin(self.M + xi))

    def decide(self):
        out = np.zeros(self.N)
        out[self.sample(self.rng)] = 1.0
        return out

    def averaged_weights(self) -> np.ndarray:
        M = self.M.copy()
        b, N = self.b, self.N

        def g(T):
            return np.array([uniform_cube_leader_probs(M, math.sqrt(b * x * N)) for x in np.atleast_1d(T)])

        return np.asarray(conditional_expectation(self.prior, float(self.t), g), dtype=float)

    def describe(self):
        return {"name": self.name, "d": self.d, "b": self.b}
