"""Learners behind one online-decision interface, plus construction from configs."""

from __future__ import annotations

import json

from ..priors import FPL_D, FIRST_ORDER_D, PRETEND_HEDGE_D, FinitePrior
from .ball import BallAdaptive, BallMinimax, LastRoundBall, OGDBall, ball_adaptive_coefficient
from .base import BALL, HEDGE, BallLearner, HedgeLearner, HorizonExceeded, Learner, project_ball
from .doubling import Doubling
from .expweights import ExpWeights, FirstOrderExpWeights
from .fpl import FPLPretend, density_eval, radial_cdf
from .hedge import (
    FixedMinimaxHedge,
    LastRoundHedge,
    PretendPriorHedge,
    RandomHorizonHedge,
    pretend_two_action_drift,
)

__all__ = [
    "Learner", "HedgeLearner", "BallLearner", "HorizonExceeded", "HEDGE", "BALL",
    "fixed_minimax_hedge", "random_horizon_hedge", "pretend_prior_hedge",
    "ball_minimax", "ball_adaptive", "ogd_ball", "doubling_wrapper", "exp_weights",
    "first_order_exp_weights", "fpl_pretend", "last_round_heuristic", "sample_action",
    "make_learner", "LEARNERS", "density_eval", "radial_cdf", "ball_adaptive_coefficient",
    "pretend_two_action_drift", "project_ball",
]


def fixed_minimax_hedge(T: int, N: int = 2) -> FixedMinimaxHedge:
    return FixedMinimaxHedge(N, T)


def random_horizon_hedge(prior: FinitePrior, N: int = 2) -> RandomHorizonHedge:
    return RandomHorizonHedge(N, prior)


def pretend_prior_hedge(d: float = PRETEND_HEDGE_D, N: int = 2, **kw) -> PretendPriorHedge:
    return PretendPriorHedge(N, d, **kw)


def ball_minimax(T: int, N: int = 10) -> BallMinimax:
    return BallMinimax(N, T)


def ball_adaptive(N: int = 10) -> BallAdaptive:
    return BallAdaptive(N)


def ogd_ball(N: int = 10, eta0: float = 2.0) -> OGDBall:
    return OGDBall(N, eta0)


def doubling_wrapper(factory, N: int, T0: int = 1, base_name: str = "base") -> Doubling:
    """Doubling trick around ``factory(T)``, a constructor taking the horizon guess."""
    return Doubling(N, factory, T0, base_name)


def exp_weights(N: int, mode: str = "pretend", T: int | None = None, d: float = 4.0,
                b: float | None = None) -> ExpWeights:
    return ExpWeights(N, mode, T, d, b)


def first_order_exp_weights(N: int, d: float = FIRST_ORDER_D) -> FirstOrderExpWeights:
    return FirstOrderExpWeights(N, d)


def fpl_pretend(N: int, d: float = FPL_D, b: float | None = None, rng=None) -> FPLPretend:
    return FPLPretend(N, d, b, rng)


def last_round_heuristic(kind: str, N: int = 2) -> Learner:
    if kind == HEDGE:
        return LastRoundHedge(N)
    if kind == BALL:
        return LastRoundBall(N)
    raise ValueError(f"kind must be 'hedge' or 'ball', got {kind!r}")


def sample_action(learner: Learner, rng) -> int:
    """Draw the learner's action for the current round from ``rng``."""
    return learner.sample(rng)


def _prior_from_config(cfg) -> FinitePrior:
    if "uniform" in cfg:
        lo, hi = cfg["uniform"]
        return FinitePrior.uniform(int(lo), int(hi))
    if "geometric" in cfg:
        return FinitePrior.geometric(float(cfg["geometric"]), int(cfg["max"]))
    return FinitePrior(tuple(cfg["support"]), tuple(cfg["probs"]))


def _build_doubling(N, base, T0=1):
    base_cfg = _normalize(base)
    name = base_cfg["name"]

    def factory(T):
        return make_learner({**base_cfg, "T": T}, N)

    return Doubling(N, factory, T0, base_name=name)


LEARNERS = {
    "fixed_minimax_hedge": lambda N, T: FixedMinimaxHedge(N, T),
    "random_horizon_hedge": lambda N, prior: RandomHorizonHedge(N, _prior_from_config(prior)),
    "pretend_prior_hedge": lambda N, d=PRETEND_HEDGE_D, horizon_cap=128: PretendPriorHedge(N, d, horizon_cap),
    "last_round_hedge": lambda N: LastRoundHedge(N),
    "ball_minimax": lambda N, T: BallMinimax(N, T),
    "ball_adaptive": lambda N: BallAdaptive(N),
    "ogd_ball": lambda N, eta0=2.0: OGDBall(N, eta0),
    "last_round_ball": lambda N: LastRoundBall(N),
    "doubling": _build_doubling,
    "exp_weights": lambda N, mode="pretend", T=None, d=4.0, b=None: ExpWeights(N, mode, T, d, b),
    "first_order_exp_weights": lambda N, d=FIRST_ORDER_D: FirstOrderExpWeights(N, d),
    "fpl_pretend": lambda N, d=FPL_D, b=None: FPLPretend(N, d, b),
}


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _normalize(config) -> dict:
    if isinstance(config, dict):
        if "name" not in config:
            raise ValueError("learner config needs a 'name'")
        return dict(config)
    if isinstance(config, str):
        name, _, rest = config.partition(":")
        out = {"name": name.strip()}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"bad learner parameter {item!r}; expected key=value")
            out[key.strip()] = _parse_value(val.strip())
        return out
    raise TypeError("learner config must be a dict or a 'name:key=value,...' string")


def make_learner(config, N: int) -> Learner:
    """Build a learner from ``{"name": ..., **params}`` or ``"name:key=value,..."``.

    An ``id`` key, if present, is ignored here (the arena uses it as a label).
    """
    cfg = _normalize(config)
    cfg.pop("id", None)
    name = cfg.pop("name")
    if name not in LEARNERS:
        raise ValueError(f"unknown learner {name!r}; choose from {sorted(LEARNERS)}")
    try:
        return LEARNERS[name](N, **cfg)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from exc
