"""Exponential-weights learners for general losses in ``[0, 1]^N``."""

from __future__ import annotations

import math

import numpy as np

from ..priors import (
    FIRST_ORDER_D,
    ContinuousPowerLaw,
    DiscretePowerLaw,
    conditional_expectation,
    exp_weights_optimal_b,
)
from .base import HedgeLearner, clean_distribution


def softmax_rows(eta, M) -> np.ndarray:
    """Rows ``P_i proportional to exp(-eta M_i)`` for each learning rate in ``eta``."""
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    M = np.asarray(M, dtype=float)
    logits = -eta[:, None] * (M - M.min())[None, :]
    logits -= logits.max(axis=1, keepdims=True)
    E = np.exp(logits)
    return E / E.sum(axis=1, keepdims=True)


class ExpWeights(HedgeLearner):
    """Exponential weights with a fixed, time-varying or pretend-prior learning rate.

    ``fixed``: ``eta = sqrt(8 ln N / T)``.  ``time_varying``: ``eta_t =
    sqrt(8 ln N / t)``.  ``pretend``: the weights are ``E[P^T | T >= t]`` with
    ``eta_T = sqrt(b ln N / T)`` and a discrete ``1/T^d`` prior.
    """

    name = "exp_weights"

    def __init__(self, N: int, mode: str = "pretend", T: int | None = None,
                 d: float = 4.0, b: float | None = None):
        if N < 2:
            raise ValueError("need N >= 2")
        if mode not in ("fixed", "time_varying", "pretend"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "fixed" and (T is None or T < 1):
            raise ValueError("fixed mode needs a horizon T >= 1")
        self.mode = mode
        self.T = T
        self.d = float(d)
        self.b = exp_weights_optimal_b(self.d) if b is None else float(b)
        self.anytime = mode != "fixed"
        if mode == "pretend":
            self.prior = DiscretePowerLaw(self.d)
        super().__init__(N)

    def decide(self):
        lnN = math.log(self.N)
        if self.mode == "fixed":
            return softmax_rows(math.sqrt(8.0 * lnN / self.T), self.M)[0]
        if self.mode == "time_varying":
            return softmax_rows(math.sqrt(8.0 * lnN / self.t), self.M)[0]
        M = self.M.copy()
        scale = self.b * lnN

        def g(T):
            return softmax_rows(np.sqrt(scale / np.asarray(T, dtype=float)), M)

        P = conditional_expectation(self.prior, self.t, g, tol=1e-9, max_terms=200_000,
                                    smooth=True)
        return clean_distribution(P)

    def describe(self):
        out = {"name": self.name, "mode": self.mode}
        if self.mode == "fixed":
            out["T"] = self.T
        if self.mode == "pretend":
            out.update(d=self.d, b=self.b)
        return out


class FirstOrderExpWeights(HedgeLearner):
    """Exponential weights averaged over a pretend prior on the best action's loss.

    With ``m = min_i M_i + 1`` and ``eta_m = sqrt(ln N / m)``, plays
    ``E[P^m | m >= m_{t-1}]`` under the continuous ``1/m^d`` density.  The
    quadrature result is renormalized; the deviation from 1 before
    renormalizing is kept in ``normalization_error``.
    """

    name = "first_order_exp_weights"

    def __init__(self, N: int, d: float = FIRST_ORDER_D):
        if N < 2:
            raise ValueError("need N >= 2")
        self.d = float(d)
        super().__init__(N)

    def reset(self):
        super().reset()
        self.normalization_error = 0.0

    def decide(self):
        M = self.M.copy()
        lnN = math.log(self.N)
        m0 = float(M.min()) + 1.0
        prior = ContinuousPowerLaw(self.d)

        def g(m):
            return softmax_rows(np.sqrt(lnN / np.asarray(m, dtype=float)), M)

        P = np.asarray(conditional_expectation(prior, m0, g), dtype=float)
        self.normalization_error = float(P.sum() - 1.0)
        if abs(self.normalization_error) > 1e-6:
            raise ArithmeticError(
                f"weight quadrature did not converge (sum off by {self.normalization_error:.3g})"
            )
        return clean_distribution(P / P.sum())

    def describe(self):
        return {"name": self.name, "d": self.d}
