"""Fixed-horizon minimax values for Hedge with basis-vector losses.

With losses restricted to the standard basis vectors, the minimax regret of an
``r``-round game started from cumulative losses ``M`` is

    V(M, r) = r / N - R(M, r),

where ``R(M, r)`` is the expected loss of the best action when the adversary
plays uniformly random basis vectors for the remaining rounds.  ``R`` is
computed exactly by a memoized recursion keyed on the sorted offsets
``M - min(M)``.  Offsets are capped at the number of remaining rounds, since an
action that is ``r`` or more behind the leader can never become the minimum.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

import numpy as np
from scipy.special import betainc, erf, poch

__all__ = [
    "StateBudgetExceeded",
    "RandomWalkTable",
    "random_walk_R",
    "minimax_V",
    "minimax_weights",
    "estimate_R",
    "two_action_game_value",
    "two_action_drift",
    "two_action_weights",
    "c_N",
    "default_table",
]

DEFAULT_STATE_BUDGET = 10**7


class StateBudgetExceeded(MemoryError):
    """Raised when an exact recursion would need more memo entries than allowed."""


def _as_losses(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 1 or M.size < 2:
        raise ValueError("cumulative loss vector needs at least two actions")
    if not np.all(np.isfinite(M)):
        raise ValueError("cumulative losses must be finite")
    return M


def _check_rounds(r) -> int:
    if int(r) != r or r < 0:
        raise ValueError(f"remaining rounds must be a nonnegative integer, got {r!r}")
    return int(r)


class RandomWalkTable:
    """Memo table for the random-walk function ``R``.

    Lookups and inserts are single dict operations, so concurrent callers on one
    table can at worst compute the same entry twice; entries are pure functions
    of their key, so the table is never left inconsistent.
    """

    def __init__(self, state_budget: int = DEFAULT_STATE_BUDGET):
        self.state_budget = int(state_budget)
        self._memo: dict[tuple, float] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._memo)

    def clear(self) -> None:
        with self._lock:
            self._memo.clear()

    @staticmethod
    def key(M: np.ndarray, r: int) -> tuple[float, tuple]:
        """Return ``(shift, offsets)`` with ``R(M, r) = shift + R(offsets, r)``."""
        m = float(M.min())
        offsets = tuple(sorted(min(float(x) - m, float(r)) for x in M))
        return m, offsets

    def R(self, M, r: int) -> float:
        M = _as_losses(M)
        r = _check_rounds(r)
        shift, offsets = self.key(M, r)
        return shift + self._walk(offsets, r)

    def _walk(self, offsets: tuple, r: int) -> float:
        if r == 0:
            return 0.0
        memo_key = (offsets, r)
        hit = self._memo.get(memo_key)
        if hit is not None:
            return hit
        n = len(offsets)
        total = 0.0
        i = 0
        while i < n:
            j = i
            while j < n and offsets[j] == offsets[i]:
                j += 1
            # equal offsets are interchangeable: bump the last copy of the group
            bumped = list(offsets)
            bumped[j - 1] += 1.0
            m = min(bumped)
            child = tuple(sorted(min(x - m, float(r - 1)) for x in bumped))
            total += (j - i) * (m + self._walk(child, r - 1))
            i = j
        value = total / n
        if len(self._memo) >= self.state_budget:
            raise StateBudgetExceeded(
                f"random-walk memo exceeded {self.state_budget} states "
                f"(N={n}, r={r}); use estimate_R instead"
            )
        self._memo[memo_key] = value
        return value

    def V(self, M, r: int) -> float:
        M = _as_losses(M)
        r = _check_rounds(r)
        return r / M.size - self.R(M, r)

    def weights(self, M, r: int) -> np.ndarray:
        M = _as_losses(M)
        r = _check_rounds(r)
        if r < 1:
            raise ValueError("minimax weights need at least one remaining round")
        n = M.size
        base = self.R(M, r)
        P = np.empty(n)
        for i in range(n):
            bumped = M.copy()
            bumped[i] += 1.0
            P[i] = 1.0 / n + self.R(bumped, r - 1) - base
        return P


_default = RandomWalkTable()


def default_table() -> RandomWalkTable:
    return _default


def random_walk_R(M, r: int, table: RandomWalkTable | None = None) -> float:
    """Expected best-action loss after ``r`` uniformly random basis-vector rounds."""
    return (_default if table is None else table).R(M, r)


def minimax_V(M, r: int, table: RandomWalkTable | None = None) -> float:
    """Minimax regret ``r/N - R(M, r)`` of the remaining ``r``-round game."""
    return (_default if table is None else table).V(M, r)


def minimax_weights(M, r: int, table: RandomWalkTable | None = None) -> np.ndarray:
    """Minimax distribution ``P_i = V(M, r) - V(M + e_i, r - 1)``."""
    return (_default if table is None else table).weights(M, r)


def estimate_R(M, r: int, samples: int, seed=None) -> tuple[float, float]:
    """Monte Carlo estimate of ``R(M, r)`` and its standard error.

    Each sample path is an independent run of ``r`` uniform basis vectors, which
    is summarised by its multinomial count vector.
    """
    M = _as_losses(M)
    r = _check_rounds(r)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if r == 0:
        return float(M.min()), 0.0
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(r, np.full(M.size, 1.0 / M.size), size=samples)
    best = (M + counts).min(axis=1)
    est = float(best.mean())
    stderr = float(best.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return est, stderr


def c_N(N: int) -> float:
    """Constant in the bound ``V(0, T) <= c_N sqrt(T)``."""
    if N < 2:
        raise ValueError("c_N needs N >= 2")
    return math.sqrt(2.0 * (N - 1) * math.log(N)) / N


_EXACT_S_LIMIT = 64


def two_action_game_value(T: int) -> float:
    """Closed-form value ``S(T) = T 2^-T C(T-1, floor(T/2))`` of the N=2 game."""
    if int(T) != T or T < 1:
        raise ValueError("T must be a positive integer")
    T = int(T)
    if T <= _EXACT_S_LIMIT:
        return float(Fraction(T * math.comb(T - 1, T // 2), 2**T))
    # C(2m, m) / 4^m = Gamma(m + 1/2) / (sqrt(pi) Gamma(m + 1))
    m = T // 2
    lead = m if T % 2 == 0 else m + 0.5
    return float(lead * poch(m + 1, -0.5) / math.sqrt(math.pi))


def _binom_half_cdf(m, n) -> np.ndarray:
    """``P[X <= m]`` for ``X ~ Bin(n, 1/2)``, continued to real ``m`` and ``n``."""
    m, n = np.broadcast_arrays(np.asarray(m, float), np.asarray(n, float))
    out = np.where(m < 0, 0.0, 1.0)
    inside = (m >= 0) & (m < n)
    if np.any(inside):
        out = out.copy()
        out[inside] = betainc(n[inside] - m[inside], m[inside] + 1.0, 0.5)
    return out


_GAUSS_S = 1e8


def two_action_drift(k, s, odd=None) -> np.ndarray:
    """``P[2X < k + s] - P[2X > k + s]`` for ``X ~ Bin(s, 1/2)``.

    ``k = M_2 - M_1`` is the lead of action 1.  With ``s = T - t`` future rounds
    the N=2 minimax weight on action 1 is ``(1 + drift) / 2``.  For integer
    ``s`` the parity of ``k + s`` is read off directly; passing ``odd`` selects
    a parity class explicitly, which gives a smooth continuation in real ``s``.
    Beyond ``s = 1e8``, where scipy's incomplete beta function starts to lose
    accuracy (1e-4 relative by 3e8), it is replaced by the
    midpoint-rule Gaussian limit, whose relative error is ``O(1/s)``.
    """
    s = np.asarray(s, dtype=float)
    k = float(k)
    if odd is None:
        if not np.all(s == np.round(s)):
            raise ValueError("non-integer s needs an explicit parity class")
        odd = (np.round(s + k).astype(np.int64) % 2) == 1
    odd = np.broadcast_to(np.asarray(odd, dtype=bool), s.shape)
    half = (k + s) / 2.0
    m_below = np.where(odd, half - 0.5, half - 1.0)  # largest X with 2X < k+s
    m_upto = np.where(odd, half - 0.5, half)  # largest X with 2X <= k+s
    small = s <= _GAUSS_S
    below = _binom_half_cdf(np.where(small, m_below, -1.0), np.where(small, s, 1.0))
    above = 1.0 - _binom_half_cdf(np.where(small, m_upto, -1.0), np.where(small, s, 1.0))
    out = below - above
    if not np.all(small):
        # 2X - s has mass ~2 phi on a lattice of step 2; sum it by the midpoint rule
        root = np.sqrt(2.0 * np.where(small, 1.0, s))
        gauss = np.where(odd, erf(k / root), 0.5 * (erf((k - 1.0) / root) + erf((k + 1.0) / root)))
        out = np.where(small, out, gauss)
    return out


def two_action_weights(M, r) -> np.ndarray:
    """Closed-form N=2 minimax weights for one or many remaining-round counts."""
    M = _as_losses(M)
    if M.size != 2:
        raise ValueError("closed form is for two actions")
    if not np.all(M == np.round(M)):
        raise ValueError("closed form needs integer cumulative losses")
    r = np.asarray(r)
    if np.any(r < 1):
        raise ValueError("need at least one remaining round")
    drift = two_action_drift(M[1] - M[0], r - 1)
    p1 = 0.5 * (1.0 + drift)
    return np.stack([p1, 1.0 - p1], axis=-1)

