"""Exact minimax solutions of small Hedge games over finite loss spaces.

Each node of the game tree is a stage game ``min_P max_Z P.Z + cont(Z)``,
solved as a linear program.  When the optimal distribution is not unique the
one of minimal Euclidean norm is returned, so results are reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.optimize import brentq, linprog, minimize

from .priors import FinitePrior, conditional_pmf, stop_prob
from .values import StateBudgetExceeded, two_action_game_value

__all__ = [
    "FiniteLossSpace",
    "StageGameSolution",
    "NodeBudgetExceeded",
    "SolverToleranceError",
    "solve_stage",
    "ExactSolver",
    "exact_V",
    "exact_solution",
    "random_horizon_value",
    "RandomHorizonSolver",
    "fixed_horizon_mixture",
    "scaled_lower_bound",
    "generating_function_check",
    "generating_function_series",
]

DEFAULT_NODE_BUDGET = 10**6
VALUE_TOL = 1e-9


class NodeBudgetExceeded(StateBudgetExceeded):
    """Raised when an exact game-tree solve would exceed its stage-solve budget."""


class SolverToleranceError(ArithmeticError):
    """The LP solution could not be certified to the requested tolerance."""


@dataclass(frozen=True)
class FiniteLossSpace:
    """A finite set of loss vectors in ``[0, 1]^N``."""

    vectors: tuple
    name: str = "custom"

    def __post_init__(self):
        arr = np.asarray(self.vectors, dtype=float)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] < 2:
            raise ValueError("loss space needs at least one vector of length >= 2")
        if np.any(arr < 0) or np.any(arr > 1):
            raise ValueError("loss vector entries must lie in [0, 1]")
        vecs = tuple(tuple(float(x) for x in row) for row in arr)
        if len(set(vecs)) != len(vecs):
            raise ValueError("loss vectors must be distinct")
        object.__setattr__(self, "vectors", vecs)

    @property
    def N(self) -> int:
        return len(self.vectors[0])

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=float)

    def __len__(self) -> int:
        return len(self.vectors)

    @classmethod
    def basis(cls, N: int) -> "FiniteLossSpace":
        return cls(tuple(map(tuple, np.eye(N))), name="basis")

    @classmethod
    def binary(cls, N: int) -> "FiniteLossSpace":
        return cls(tuple(itertools.product((0.0, 1.0), repeat=N)), name="binary")

    @classmethod
    def complemented_basis(cls, N: int) -> "FiniteLossSpace":
        return cls(tuple(map(tuple, 1.0 - np.eye(N))), name="complemented")

    def is_permutation_symmetric(self) -> bool:
        # transpositions (0 i) generate the symmetric group
        vecs = set(self.vectors)
        for i in range(1, self.N):
            perm = list(range(self.N))
            perm[0], perm[i] = i, 0
            if {tuple(v[p] for p in perm) for v in vecs} != vecs:
                return False
        return True


@dataclass(frozen=True)
class StageGameSolution:
    distribution: np.ndarray
    value: float


def _solve_lp(Z: np.ndarray, c: np.ndarray):
    K, N = Z.shape
    # variables (P_1..P_N, v); minimize v s.t. Z P - v <= -c
    obj = np.zeros(N + 1)
    obj[-1] = 1.0
    A_ub = np.hstack([Z, -np.ones((K, 1))])
    A_eq = np.hstack([np.ones((1, N)), np.zeros((1, 1))])
    bounds = [(0.0, None)] * N + [(None, None)]
    res = linprog(obj, A_ub=A_ub, b_ub=-c, A_eq=A_eq, b_eq=[1.0], bounds=bounds,
                  method="highs")
    if res.status != 0:
        raise SolverToleranceError(f"stage LP failed: {res.message}")
    return res.x[:N], float(res.x[-1])


def _min_norm_on_face(Z, c, P0, v_star):
    N = Z.shape[1]
    cons = [
        {"type": "eq", "fun": lambda P: P.sum() - 1.0, "jac": lambda P: np.ones(N)},
        {"type": "ineq", "fun": lambda P: v_star + 1e-12 - (Z @ P + c), "jac": lambda P: -Z},
    ]
    res = minimize(lambda P: P @ P, P0, jac=lambda P: 2 * P, method="SLSQP",
                   bounds=[(0.0, 1.0)] * N, constraints=cons,
                   options={"ftol": 1e-15, "maxiter": 500})
    return res.x if res.success else P0


def _polish(Z, c, P, v_lp):
    """Re-solve the active equality system exactly and certify the result."""
    N = Z.shape[1]
    slack = v_lp - (Z @ P + c)
    active = np.flatnonzero(slack < 1e-6)
    free = np.flatnonzero(P > 1e-7)
    if free.size == 0:
        return None
    # unknowns (P_free, v)
    rows = [np.append(Z[k, free], -1.0) for k in active]
    rows.append(np.append(np.ones(free.size), 0.0))
    A = np.asarray(rows)
    b = np.append(-c[active], 1.0)
    if np.linalg.matrix_rank(A) == free.size + 1:
        sol = np.linalg.lstsq(A, b, rcond=None)[0]
        Pf = sol[:-1]
    else:
        # the optimal face is not a point; take its min-norm element at fixed value
        A2 = np.vstack([Z[active][:, free], np.ones((1, free.size))])
        b2 = np.append(v_lp - c[active], 1.0)
        Pf = np.linalg.lstsq(A2, b2, rcond=None)[0]
    out = np.zeros(N)
    out[free] = Pf
    if np.any(out < -1e-12) or abs(out.sum() - 1.0) > 1e-12:
        return None
    out = np.clip(out, 0.0, None)
    out /= out.sum()
    if np.max(Z @ out + c) > v_lp + 1e-9:
        return None
    return out


def _solve_arrays(Z: np.ndarray, c: np.ndarray) -> StageGameSolution:
    P_lp, v_lp = _solve_lp(Z, c)
    P = _min_norm_on_face(Z, c, P_lp, v_lp)
    polished = _polish(Z, c, P, v_lp)
    if polished is None:
        polished = _polish(Z, c, P_lp, v_lp)
    if polished is not None:
        P = polished
    P = np.clip(P, 0.0, None)
    P /= P.sum()
    value = float(np.max(Z @ P + c))
    if value > v_lp + 1e-8:
        raise SolverToleranceError(
            f"stage solution value {value} exceeds LP optimum {v_lp} by more than 1e-8"
        )
    return StageGameSolution(P, value)


def solve_stage(M, continuations: Mapping) -> StageGameSolution:
    """Solve ``min_P max_Z P.Z + continuations[Z]`` over the simplex.

    ``continuations`` maps each loss vector (a tuple) to the value of the game
    after that vector is played.  ``M`` is the current cumulative loss vector
    and only fixes the number of actions.
    """
    N = len(M)
    if not continuations:
        raise ValueError("need at least one loss vector")
    Z = np.asarray([tuple(z) for z in continuations], dtype=float)
    if Z.shape[1] != N:
        raise ValueError("loss vectors do not match the number of actions")
    c = np.asarray(list(continuations.values()), dtype=float)
    return _solve_arrays(Z, c)


class ExactSolver:
    """Memoized game-tree solver for one loss space.

    Values use ``V(M, 0) = -min(M)`` (learner loss counted from the current
    round on), so shifting ``M`` by a constant shifts the value, and the memo
    is keyed on shift-normalized (and, for symmetric spaces, sorted) losses.
    A solver instance is not meant to be shared across threads.
    """

    def __init__(self, space: FiniteLossSpace, node_budget: int = DEFAULT_NODE_BUDGET):
        self.space = space
        self.node_budget = int(node_budget)
        self.symmetric = space.is_permutation_symmetric()
        self._Z = space.matrix
        self._memo: dict = {}
        self._solutions: dict = {}
        self.stage_solves = 0

    def _normalize(self, M):
        M = np.asarray(M, dtype=float)
        m = float(M.min())
        off = M - m
        if self.symmetric:
            off = np.sort(off)
        return m, tuple(np.round(off, 12))

    def _count(self):
        self.stage_solves += 1
        if self.stage_solves > self.node_budget:
            raise NodeBudgetExceeded(
                f"exact solve exceeded {self.node_budget} stage solves"
            )

    def value(self, M, r: int) -> float:
        if int(r) != r or r < 0:
            raise ValueError("remaining rounds must be a nonnegative integer")
        M = np.asarray(M, dtype=float)
        if M.size != self.space.N:
            raise ValueError("cumulative loss vector does not match the space")
        shift, key = self._normalize(M)
        return self._value(key, int(r)) - shift

    def _value(self, off: tuple, r: int) -> float:
        if r == 0:
            return 0.0  # -min of a shift-normalized vector
        hit = self._memo.get((off, r))
        if hit is not None:
            return hit
        sol = self._stage(off, r)
        self._memo[(off, r)] = sol.value
        return sol.value

    def _stage(self, off: tuple, r: int) -> StageGameSolution:
        base = np.asarray(off)
        cont = np.empty(len(self._Z))
        for k, z in enumerate(self._Z):
            shift, key = self._normalize(base + z)
            cont[k] = self._value(key, r - 1) - shift
        self._count()
        return _solve_arrays(self._Z, cont)

    def solution(self, M, r: int) -> StageGameSolution:
        """Optimal first-stage distribution and value at ``(M, r)``."""
        if r < 1:
            raise ValueError("need at least one remaining round")
        M = np.asarray(M, dtype=float)
        cont = {tuple(z): self.value(M + z, r - 1) for z in self._Z}
        self._count()
        return solve_stage(M, cont)


def exact_V(space: FiniteLossSpace, M, r: int, node_budget: int = DEFAULT_NODE_BUDGET) -> float:
    """Exact minimax value of the ``r``-round game from cumulative losses ``M``."""
    return ExactSolver(space, node_budget).value(M, r)


def exact_solution(space: FiniteLossSpace, M, r: int,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> StageGameSolution:
    return ExactSolver(space, node_budget).solution(M, r)


class RandomHorizonSolver:
    """Memoized ``Vbar_t(M)`` for a finite-support horizon prior.

    ``Vbar_t(M) = min_P max_Z P.Z + q_t V(M+Z, 0) + (1 - q_t) Vbar_{t+1}(M+Z)``
    with ``q_t = Pr[T = t | T >= t]`` and ``V(M, 0) = -min(M)``.
    """

    def __init__(self, space: FiniteLossSpace, prior: FinitePrior,
                 node_budget: int = DEFAULT_NODE_BUDGET):
        if not isinstance(prior, FinitePrior):
            raise TypeError("random-horizon recursion needs a finite-support prior")
        self.space = space
        self.prior = prior
        self.node_budget = int(node_budget)
        self._norm = ExactSolver(space, node_budget)
        self._memo: dict = {}
        self.stage_solves = 0

    def _check(self, t, M):
        if t < 1 or t > self.prior.max_horizon:
            raise ValueError("t must lie in [1, max support]")
        M = np.asarray(M, dtype=float)
        if M.size != self.space.N:
            raise ValueError("cumulative loss vector does not match the space")
        return M

    def q(self, t: int) -> float:
        return 1.0 if t == self.prior.max_horizon else stop_prob(self.prior, t)

    def continuations(self, t: int, M) -> np.ndarray:
        """``q_t V(M+Z, 0) + (1 - q_t) Vbar_{t+1}(M+Z)`` for each ``Z`` in the space."""
        M = self._check(t, M)
        qt = self.q(t)
        out = np.empty(len(self.space))
        for k, z in enumerate(self.space.matrix):
            nxt = M + z
            val = -qt * nxt.min()
            if qt < 1.0:
                shift, key = self._norm._normalize(nxt)
                val += (1.0 - qt) * (self._vbar(key, t + 1) - shift)
            out[k] = val
        return out

    def solution(self, t: int, M) -> StageGameSolution:
        cont = self.continuations(t, M)
        self.stage_solves += 1
        if self.stage_solves > self.node_budget:
            raise NodeBudgetExceeded(
                f"random-horizon solve exceeded {self.node_budget} stage solves"
            )
        return _solve_arrays(self.space.matrix, cont)

    def value(self, t: int, M) -> float:
        M = self._check(t, M)
        shift, key = self._norm._normalize(M)
        return self._vbar(key, int(t)) - shift

    def _vbar(self, key, t):
        hit = self._memo.get((key, t))
        if hit is None:
            hit = self.solution(t, np.asarray(key)).value
            self._memo[(key, t)] = hit
        return hit


def random_horizon_value(space: FiniteLossSpace, prior: FinitePrior, t: int, M,
                         node_budget: int = DEFAULT_NODE_BUDGET) -> StageGameSolution:
    """Value and optimal play at round ``t`` when ``T`` is drawn from ``prior``."""
    return RandomHorizonSolver(space, prior, node_budget).solution(int(t), M)


def fixed_horizon_mixture(space: FiniteLossSpace, prior: FinitePrior, t: int, M,
                          node_budget: int = DEFAULT_NODE_BUDGET):
    """``E[P^T | T >= t]`` and ``E[V(M, T - t + 1) | T >= t]`` from fixed-horizon play."""
    solver = ExactSolver(space, node_budget)
    T, w = conditional_pmf(prior, t)
    dist = np.zeros(space.N)
    val = 0.0
    for Ti, wi in zip(T, w):
        sol = solver.solution(M, int(Ti) - t + 1)
        dist += wi * sol.distribution
        val += wi * sol.value
    return dist, val


def scaled_lower_bound(T0: int, method: str = "partial_sum") -> float:
    """Lower bound on the scaled regret of any N=2 adversarial-horizon learner.

    ``partial_sum`` returns ``(sum_{k=1}^{T0/2-1} S(2k)/2^k)^-1``, which
    decreases to sqrt(2).  ``closed_form`` evaluates the restricted-adversary
    recursion exactly at cap ``T0``; ``recursion`` runs that recursion
    numerically and exists to cross-check ``closed_form`` at small ``T0``.
    """
    if int(T0) != T0 or T0 < 4 or T0 % 2:
        raise ValueError("T0 must be an even integer >= 4")
    T0 = int(T0)
    S = two_action_game_value
    if method == "partial_sum":
        return 1.0 / math.fsum(S(2 * k) / 2.0**k for k in range(1, T0 // 2))
    if method == "closed_form":
        t = 2
        denom = S(T0) + math.fsum(2.0 ** (k - 1) * S(T0 - 2 * k) for k in range(1, (T0 - t) // 2 + 1))
        return (2.0 ** ((T0 - t) / 2) * (0.5 + 0.5) - 0.5) / denom
    if method == "recursion":
        if T0 > 16:
            raise ValueError("the raw recursion is a cross-check for T0 <= 16")
        return _lower_bound_recursion(T0)(0.5)
    raise ValueError(f"unknown method {method!r}")


def _lower_bound_recursion(T0: int):
    # each level is min over p of the max of an increasing and a decreasing
    # affine function of p, hence affine in L; represent it by two samples
    def top(L):
        return L / two_action_game_value(T0)

    level = top
    for t in range(T0 - 2, 1, -2):
        S_t = two_action_game_value(t)
        nxt = level

        def G(L, nxt=nxt, S_t=S_t):
            f = lambda p: (L + p) / S_t - nxt(L + 0.5 - p)
            lo, hi = -1.0, 1.0
            while f(lo) > 0:
                lo *= 2.0
            while f(hi) < 0:
                hi *= 2.0
            p = brentq(f, lo, hi, xtol=1e-15, rtol=1e-15)
            return (L + p) / S_t

        a0, a1 = G(0.0), G(1.0)
        level = lambda L, a0=a0, a1=a1: a0 + (a1 - a0) * L
    return level


def generating_function_check(x: float) -> tuple[float, float]:
    """``G(x) = sum C(2j, j) x^j = (1-4x)^-1/2`` and ``F(x) = x G'(x)``."""
    if not 0.0 <= x < 0.25:
        raise ValueError("series converge only for 0 <= x < 1/4")
    G = (1.0 - 4.0 * x) ** -0.5
    F = 2.0 * x * (1.0 - 4.0 * x) ** -1.5
    return G, F


def generating_function_series(x: float, terms: int = 50) -> tuple[float, float]:
    """Partial sums of the two series behind :func:`generating_function_check`."""
    if not 0.0 <= x < 0.25:
        raise ValueError("series converge only for 0 <= x < 1/4")
    G = F = 0.0
    for j in range(terms):
        term = math.comb(2 * j, j) * x**j
        G += term
        F += j * term
    return G, F
