"""Pretend priors over the horizon and the regret-bound evaluators built on them.

The adaptive learners average a fixed-horizon rule over a horizon ``T`` drawn
from a heavy-tailed prior conditioned on ``T >= t``.  This module holds the
priors (discrete and continuous power laws, plus finite-support priors for the
exact random-horizon game), their tail masses, stopping probabilities,
conditional expectations and samplers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import zeta

__all__ = [
    "DivergenceError",
    "DiscretePowerLaw",
    "ContinuousPowerLaw",
    "FinitePrior",
    "tail_mass",
    "stop_prob",
    "conditional_pmf",
    "conditional_expectation",
    "lattice_tail_sum",
    "sample_horizon",
    "gamma_constant",
    "BoundSpec",
    "eval_bound",
    "PRETEND_HEDGE_D",
    "FPL_D",
    "fpl_optimal_b",
    "exp_weights_optimal_b",
    "FIRST_ORDER_D",
]

PRETEND_HEDGE_D = 2.35
FPL_D = 1.0 + math.sqrt(3.0) / 2.0
FIRST_ORDER_D = 2.5 + math.sqrt(2.0)


def fpl_optimal_b(d: float = FPL_D) -> float:
    return (d - 1.5) / ((d - 0.5) * (d - 1.0))


def exp_weights_optimal_b(d: float) -> float:
    return (4.0 * d - 2.0) / (d - 1.5)


class DivergenceError(ArithmeticError):
    """The requested conditional expectation is infinite under the prior."""


def _check_exponent(d: float) -> float:
    d = float(d)
    if not d > 1.5:
        raise ValueError(f"power-law exponent must exceed 3/2, got {d}")
    return d


@dataclass(frozen=True)
class DiscretePowerLaw:
    """``Pr[T = t]`` proportional to ``t**-d`` on ``start, start + 1, ...``."""

    d: float
    start: int = 1

    def __post_init__(self):
        _check_exponent(self.d)
        if int(self.start) != self.start or self.start < 1:
            raise ValueError("start must be a positive integer")

    @property
    def discrete(self) -> bool:
        return True

    def weight(self, T):
        return np.asarray(T, dtype=float) ** -self.d

    def tail(self, t) -> float:
        # Hurwitz zeta is exactly sum_{T >= t} T**-d
        return float(zeta(self.d, t))

    def scaled_tail(self, t) -> float:
        """``t**d * S_t``, which stays representable when ``S_t`` underflows."""
        d = self.d
        if d * math.log(t) < 600.0:
            return float(zeta(d, t)) * float(t) ** d
        # terms (1 + j/t)**-d fall below 1e-18 by j = J; the rest is far below that
        J = int(math.ceil(t * math.expm1(41.5 / d))) + 1
        T = np.arange(t, t + J + 1, dtype=float)
        return float(np.sum((T / t) ** -d))


@dataclass(frozen=True)
class ContinuousPowerLaw:
    """Density proportional to ``T**-d`` on ``[start, inf)``."""

    d: float
    start: float = 1.0

    def __post_init__(self):
        _check_exponent(self.d)
        if not self.start >= 1.0:
            raise ValueError("start must be >= 1")

    @property
    def discrete(self) -> bool:
        return False

    def weight(self, T):
        return np.asarray(T, dtype=float) ** -self.d

    def tail(self, t) -> float:
        return t ** (1.0 - self.d) / (self.d - 1.0)


@dataclass(frozen=True)
class FinitePrior:
    """Horizon prior with finite integer support.

    Used for the exact random-horizon game and for the uniform and geometric
    fixtures, which are known to make poor pretend priors.
    """

    support: tuple
    probs: tuple
    _cum_tail: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        probs = np.asarray(self.probs, dtype=float)
        if support.ndim != 1 or support.size == 0 or support.shape != probs.shape:
            raise ValueError("support and probs must be matching non-empty vectors")
        if np.any(np.diff(support) <= 0) or support[0] < 1:
            raise ValueError("support must be strictly increasing positive integers")
        if np.any(probs < 0) or not probs.sum() > 0:
            raise ValueError("probabilities must be nonnegative and not all zero")
        probs = probs / probs.sum()
        object.__setattr__(self, "support", tuple(int(x) for x in support))
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))
        object.__setattr__(self, "_cum_tail", np.cumsum(probs[::-1])[::-1])

    @classmethod
    def point_mass(cls, T: int) -> "FinitePrior":
        return cls((T,), (1.0,))

    @classmethod
    def uniform(cls, first: int, last: int) -> "FinitePrior":
        n = last - first + 1
        return cls(tuple(range(first, last + 1)), (1.0 / n,) * n)

    @classmethod
    def geometric(cls, alpha: float, last: int) -> "FinitePrior":
        T = np.arange(1, last + 1)
        return cls(tuple(T), tuple(alpha ** T.astype(float)))

    @property
    def discrete(self) -> bool:
        return True

    @property
    def max_horizon(self) -> int:
        return self.support[-1]

    def tail(self, t) -> float:
        i = int(np.searchsorted(np.asarray(self.support), t, side="left"))
        return float(self._cum_tail[i]) if i < len(self.support) else 0.0


Prior = DiscretePowerLaw | ContinuousPowerLaw | FinitePrior


def _check_t(prior, t):
    if isinstance(prior, FinitePrior):
        if t > prior.max_horizon:
            raise ValueError(f"t={t} is beyond the prior's support")
    elif t < prior.start:
        raise ValueError(f"t={t} is below the prior's start {prior.start}")


def tail_mass(prior, t) -> float:
    """``S_t``: the (unnormalized for power laws) prior mass on ``[t, inf)``."""
    _check_t(prior, t)
    return prior.tail(t)


def stop_prob(prior, t) -> float:
    """``q_t = Pr[T = t | T >= t]``."""
    _check_t(prior, t)
    if isinstance(prior, FinitePrior):
        idx = np.searchsorted(np.asarray(prior.support), t)
        if idx < len(prior.support) and prior.support[idx] == t:
            return prior.probs[idx] / prior.tail(t)
        return 0.0
    if not prior.discrete:
        raise ValueError("stopping probability is defined for discrete priors")
    return 1.0 / prior.scaled_tail(t)


def conditional_pmf(prior: FinitePrior, t: int) -> tuple[np.ndarray, np.ndarray]:
    """Support points ``T >= t`` and their conditional probabilities."""
    _check_t(prior, t)
    support = np.asarray(prior.support)
    probs = np.asarray(prior.probs)
    keep = support >= t
    return support[keep], probs[keep] / probs[keep].sum()


@lru_cache(maxsize=64)
def _graded_rule(nodes: int, levels: int):
    # Gauss-Legendre panels [2^-(j+1), 2^-j] graded toward the v = 0 endpoint
    x, w = np.polynomial.legendre.leggauss(nodes)
    lo = 2.0 ** -np.arange(1, levels + 1)
    hi = 2.0 * lo
    v = (0.5 * (hi - lo)[:, None] * x[None, :] + 0.5 * (hi + lo)[:, None]).ravel()
    wt = (0.5 * (hi - lo)[:, None] * w[None, :]).ravel()
    return v, wt


_MAX_LEVELS = 40


def _tail_integral(f, start: float, rtol: float, t_max: float | None = None):
    """``int_start^t_max f(T) dT`` via ``T = start / v^2``.

    Without ``t_max`` the integral runs to ``start * 4**40``, beyond which a
    tail decaying faster than ``T**-1`` contributes nothing visible.  Callers
    whose ``f`` loses accuracy at huge arguments pass a finite ``t_max``.
    """
    levels = _MAX_LEVELS
    if t_max is not None:
        levels = int(max(1, min(_MAX_LEVELS, math.floor(math.log(t_max / start) / math.log(4.0)))))
    v_min = 2.0 ** -levels
    estimates = []
    for nodes in (10, 14):
        v, wt = _graded_rule(nodes, levels)
        vals = np.asarray(f(start / (v * v)), dtype=float)
        jac = 2.0 * start / v**3
        estimates.append(np.tensordot(wt * jac, vals, axes=(0, 0)))
    coarse, fine = estimates
    scale = float(np.max(np.abs(fine))) if np.size(fine) else 0.0
    if float(np.max(np.abs(fine - coarse), initial=0.0)) <= max(rtol * scale, 1e-300):
        return fine

    def integrand(v):
        return np.asarray(f(np.array([start / (v * v)])))[0] * (2.0 * start / v**3)

    floor = 1e-3 * rtol * scale
    return integrate.quad_vec(integrand, v_min, 1.0, epsrel=rtol, epsabs=floor, limit=400)[0]


def lattice_tail_sum(f: Callable, start: float, step: float = 1.0, rtol: float = 1e-11,
                     t_max: float | None = None):
    """Euler-Maclaurin estimate of ``sum_{j >= 0} f(start + j * step)``.

    ``f`` must be smooth from 10% below ``start`` onward and decay faster than
    ``T**-1``; it is called with float arrays and may return arrays with
    trailing dimensions.  The first and third derivative corrections come from
    finite differences.  The integral runs over ``T = start / v**2`` so that
    power-law tails become bounded integrands on ``(0, 1]``.
    """
    h1, h3 = 1e-3 * start, 0.05 * start
    offsets = np.array([0.0, -h1, h1, -2 * h3, -h3, h3, 2 * h3])
    vals = np.asarray(f(start + offsets))
    d1 = (vals[2] - vals[1]) / (2.0 * h1)
    d3 = (vals[6] - 2.0 * vals[5] + 2.0 * vals[4] - vals[3]) / (2.0 * h3**3)
    integral = _tail_integral(f, float(start), rtol, t_max)
    return integral / step + 0.5 * vals[0] - step * d1 / 12.0 + step**3 * d3 / 720.0


def conditional_expectation(
    prior,
    t,
    g: Callable,
    *,
    growth: float = 0.0,
    scale: float = 1.0,
    tol: float = 1e-10,
    max_terms: int = 2_000_000,
    smooth: bool = False,
    head: int = 4096,
):
    """``E[g(T) | T >= t]`` under ``prior``.

    ``g`` is vectorized over horizons and may return vectors.  The caller
    declares an envelope ``|g(T)| <= scale * T**growth``; an expectation that
    the envelope cannot keep finite raises :class:`DivergenceError`.

    Discrete priors are summed exactly up to the cutoff at which the envelope
    bounds the omitted tail by ``tol``.  When that cutoff is out of reach and
    ``g`` is smooth in real ``T`` (``smooth=True``), the first ``head`` terms
    are summed and the rest is taken from an Euler-Maclaurin tail.  Continuous
    priors are integrated adaptively after mapping ``[t, inf)`` onto ``(0, 1]``.
    """
    _check_t(prior, t)
    if isinstance(prior, FinitePrior):
        T, w = conditional_pmf(prior, t)
        vals = np.asarray(g(T), dtype=float)
        return np.tensordot(w, vals, axes=(0, 0))

    d = prior.d
    if growth >= d - 1.0:
        raise DivergenceError(
            f"E[T**{growth}] is infinite under a power law with exponent {d}"
        )
    if not prior.discrete:
        # u = t / T = v**2 turns the conditional density into 2 (d-1) v**(2d-3) dv
        def integrand(v):
            if v <= 0.0:
                return 0.0 * np.asarray(g(np.array([float(t)])), dtype=float)[0]
            return 2.0 * (d - 1.0) * v ** (2.0 * d - 3.0) * np.asarray(
                g(np.array([t / (v * v)])), dtype=float
            )[0]

        val, _ = integrate.quad_vec(integrand, 0.0, 1.0, epsrel=1e-10, epsabs=0.0, limit=400)
        return val

    # weights are (T/t)**-d throughout so that large d cannot underflow
    t = int(t)
    S = prior.scaled_tail(t)
    exponent = growth - d + 1.0  # < 0
    # smallest K with scale * sum_{T > K} T**growth (T/t)**-d <= tol * S
    log_K = (math.log(tol * S * (d - 1.0 - growth) / scale) - d * math.log(t)) / exponent
    K = t if log_K < math.log(t) else int(math.ceil(math.exp(min(log_K, 700.0))))
    n_terms = K - t + 1
    if n_terms <= max_terms:
        return _chunked_sum(g, t, K, t, d) / S
    if not smooth:
        raise ValueError(
            f"exact truncation needs {n_terms} terms (> {max_terms}); "
            "pass smooth=True if g extends smoothly to real horizons"
        )
    last = t + head - 1
    body = _chunked_sum(g, t, last, t, d)
    tail = lattice_tail_sum(lambda T: _weighted(g, T, t, d), float(last + 1))
    return (body + tail) / S


def _weighted(g, T, t, d):
    vals = np.asarray(g(T), dtype=float)
    w = (np.asarray(T, dtype=float) / t) ** -d
    return vals * w.reshape(w.shape + (1,) * (vals.ndim - 1))


def _chunked_sum(g, first: int, last: int, t: int, d: float, chunk: int = 1 << 18):
    total = 0.0
    for lo in range(first, last + 1, chunk):
        T = np.arange(lo, min(lo + chunk, last + 1), dtype=float)
        total = total + _weighted(g, T, t, d).sum(axis=0)
    return total


def sample_horizon(prior, t, rng=None, size=None, u=None):
    """Draw ``T`` from ``prior`` conditioned on ``T >= t`` by inverting the CDF.

    Either pass an RNG (``numpy.random.Generator``) or explicit uniforms ``u``.
    """
    _check_t(prior, t)
    if u is None:
        rng = np.random.default_rng(rng)
        u = rng.random(size)
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    if np.any((u < 0) | (u >= 1)):
        raise ValueError("uniforms must lie in [0, 1)")

    if isinstance(prior, FinitePrior):
        T, w = conditional_pmf(prior, t)
        idx = np.searchsorted(np.cumsum(w), u, side="right")
        out = T[np.minimum(idx, T.size - 1)]
    elif not prior.discrete:
        out = t * (1.0 - u) ** (-1.0 / (prior.d - 1.0))
    else:
        out = _discrete_power_inverse(prior, int(t), u)
    return out[0] if scalar else out


def _discrete_power_inverse(prior: DiscretePowerLaw, t: int, u: np.ndarray) -> np.ndarray:
    # smallest T >= t with Pr[T' > T | T' >= t] <= 1 - u, by vectorized bisection
    d = prior.d
    S_t = prior.tail(t)
    target = (1.0 - u) * S_t
    # S(x + 1) <= x**(1-d) / (d-1), so this x always satisfies the condition
    hi = np.ceil(((d - 1.0) * np.maximum(target, 1e-300)) ** (-1.0 / (d - 1.0)))
    hi = np.maximum(hi, t).astype(np.float64)
    lo = np.full_like(hi, t - 1.0)  # invariant: lo fails, hi satisfies
    while True:
        active = hi - lo > 1.0
        if not np.any(active):
            break
        mid = np.floor((lo + hi) / 2.0)
        ok = zeta(d, mid + 1.0) <= target
        hi = np.where(active & ok, mid, hi)
        lo = np.where(active & ~ok, mid, lo)
    return hi.astype(np.int64)


def gamma_constant(d: float) -> float:
    """``Gamma(d - 3/2) / Gamma(d)``."""
    _check_exponent(d)
    return math.exp(math.lgamma(d - 1.5) - math.lgamma(d))


@dataclass(frozen=True)
class BoundSpec:
    """Leading term of one of the pretend-prior regret bounds.

    ``kind`` is one of ``"pretend_hedge"``, ``"ball"``, ``"fpl"``,
    ``"exp_weights"`` and ``"first_order"``.
    """

    kind: str
    d: float
    N: int = 2
    b: float | None = None


def eval_bound(spec: BoundSpec, x: float) -> float:
    """Evaluate the bound at horizon ``x`` (or best-action loss ``x`` for
    ``first_order``)."""
    from .values import c_N

    d = _check_exponent(spec.d)
    if x < 0:
        raise ValueError("horizon must be nonnegative")
    if spec.kind == "pretend_hedge":
        return gamma_constant(d) * (d - 1.0) ** 2 * c_N(spec.N) * math.sqrt(math.pi * x)
    if spec.kind == "ball":
        return gamma_constant(d) * (d - 1.0) ** 2 * math.sqrt(math.pi * x)
    if spec.N < 2:
        raise ValueError("need N >= 2")
    if spec.kind == "first_order":
        return _first_order_bound(spec, x)
    if spec.b is None or spec.b <= 0:
        raise ValueError(f"{spec.kind} bound needs b > 0")
    rb = math.sqrt(spec.b)
    if spec.kind == "fpl":
        coef = (d - 1.0) / (rb * (d - 0.5)) + rb * (d - 1.0) ** 2 / (d - 1.5)
        return coef * 2.0 * math.sqrt(x * spec.N)
    if spec.kind == "exp_weights":
        coef = rb * (d - 1.0) / (4.0 * (d - 0.5)) + (d - 1.0) / ((d - 1.5) * rb)
        return coef * math.sqrt(x * math.log(spec.N))
    raise ValueError(f"unknown bound kind {spec.kind!r}")


def _first_order_bound(spec: BoundSpec, m_star: float) -> float:
    d = spec.d
    lnN = math.log(spec.N)
    lead = 3.0 * (d - 7.0 / 6.0) * (d - 1.0) / ((d - 1.5) * (d - 0.5))
    return lead * math.sqrt(m_star * lnN) + (1.0 + (d - 1.0) * math.log(m_star + 1.0)) * lnN
