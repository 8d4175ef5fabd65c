"""Adversaries, the game loop, batch max-regret curves and CSV export."""

from __future__ import annotations

import copy
import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .learners import BALL, HEDGE, Learner, make_learner
from .priors import FinitePrior
from .solver import FiniteLossSpace, RandomHorizonSolver

__all__ = [
    "Adversary",
    "RandomBasis",
    "Alternating",
    "ZeroLoss",
    "UniformCube",
    "Bernoulli",
    "FixedSequence",
    "RandomSphere",
    "RandomBall",
    "RandomHorizonBestResponse",
    "make_adversary",
    "RegretTrace",
    "run_game",
    "TrialBatchConfig",
    "max_regret_curve",
    "exhaustive_adversary_search",
    "write_traces_csv",
    "write_batch_csv",
    "read_batch_csv",
    "SearchBudgetExceeded",
    "SettingMismatch",
]

SPHERE_NOTE = "ball adversary draws points uniformly on the unit sphere unless configured otherwise"
SHARED_NOTE = "within a trial every learner faces the same loss sequence"


class SettingMismatch(ValueError):
    """Learner and adversary play different games."""


class SearchBudgetExceeded(MemoryError):
    pass


class Adversary:
    """Emits the round's loss vector; may look at the learner's current decision."""

    setting = HEDGE
    name = "adversary"

    def __init__(self, N: int):
        self.N = int(N)

    def reset(self, rng) -> None:
        self.rng = rng

    def loss(self, t: int, decision: np.ndarray, M: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"name": self.name}


class RandomBasis(Adversary):
    name = "random_basis"

    def loss(self, t, decision, M):
        z = np.zeros(self.N)
        z[self.rng.integers(self.N)] = 1.0
        return z


class Alternating(Adversary):
    """Cycles through a fixed list of vectors (default ``e_1, e_2``)."""

    name = "alternating"

    def __init__(self, N: int, vectors=None, setting: str = HEDGE):
        super().__init__(N)
        if vectors is None:
            vectors = np.eye(N)[:2] if setting == HEDGE else [np.eye(N)[0], -np.eye(N)[0]]
        self.vectors = [np.asarray(v, dtype=float) for v in vectors]
        self.setting = setting

    def loss(self, t, decision, M):
        return self.vectors[(t - 1) % len(self.vectors)].copy()

    def describe(self):
        return {"name": self.name, "setting": self.setting}


class ZeroLoss(Adversary):
    name = "zero"

    def __init__(self, N: int, setting: str = HEDGE):
        super().__init__(N)
        self.setting = setting

    def loss(self, t, decision, M):
        return np.zeros(self.N)


class UniformCube(Adversary):
    name = "uniform"

    def loss(self, t, decision, M):
        return self.rng.random(self.N)


class Bernoulli(Adversary):
    """Independent Bernoulli losses with per-action means."""

    name = "bernoulli"

    def __init__(self, N: int, means):
        super().__init__(N)
        self.means = np.broadcast_to(np.asarray(means, dtype=float), (N,)).copy()

    def loss(self, t, decision, M):
        return (self.rng.random(self.N) < self.means).astype(float)

    def describe(self):
        return {"name": self.name, "means": self.means.tolist()}


class FixedSequence(Adversary):
    name = "sequence"

    def __init__(self, N: int, sequence, setting: str = HEDGE):
        super().__init__(N)
        self.sequence = [np.asarray(z, dtype=float) for z in sequence]
        self.setting = setting

    def loss(self, t, decision, M):
        if t > len(self.sequence):
            raise IndexError("loss sequence exhausted")
        return self.sequence[t - 1].copy()


class RandomSphere(Adversary):
    setting = BALL
    name = "sphere"

    def loss(self, t, decision, M):
        g = self.rng.standard_normal(self.N)
        return g / np.linalg.norm(g)


class RandomBall(Adversary):
    setting = BALL
    name = "ball"

    def loss(self, t, decision, M):
        g = self.rng.standard_normal(self.N)
        return g / np.linalg.norm(g) * self.rng.random() ** (1.0 / self.N)


class RandomHorizonBestResponse(Adversary):
    """Maximizes the learner's loss plus the random-horizon continuation value.

    Against the optimal random-horizon learner every round is an equalizer, so
    the expected regret over the horizon prior equals ``Vbar_1(0)``.
    """

    name = "random_horizon_best_response"

    def __init__(self, space: FiniteLossSpace, prior: FinitePrior):
        super().__init__(space.N)
        self.space = space
        self.solver = RandomHorizonSolver(space, prior)

    def loss(self, t, decision, M):
        score = self.space.matrix @ decision + self.solver.continuations(t, M)
        return self.space.matrix[int(np.argmax(score))].copy()


ADVERSARIES = {
    "random_basis": lambda N: RandomBasis(N),
    "alternating": lambda N, setting=HEDGE, vectors=None: Alternating(N, vectors, setting),
    "alternating_sign": lambda N: Alternating(N, setting=BALL),
    "zero": lambda N, setting=HEDGE: ZeroLoss(N, setting),
    "uniform": lambda N: UniformCube(N),
    "bernoulli": lambda N, means=0.5: Bernoulli(N, means),
    "sequence": lambda N, sequence, setting=HEDGE: FixedSequence(N, sequence, setting),
    "sphere": lambda N: RandomSphere(N),
    "ball": lambda N: RandomBall(N),
}


def make_adversary(config, N: int) -> Adversary:
    cfg = {"name": config} if isinstance(config, str) else dict(config)
    name = cfg.pop("name")
    if name not in ADVERSARIES:
        raise ValueError(f"unknown adversary {name!r}; choose from {sorted(ADVERSARIES)}")
    try:
        return ADVERSARIES[name](N, **cfg)
    except TypeError as exc:
        raise ValueError(f"bad parameters for adversary {name}: {exc}") from exc


@dataclass
class RegretTrace:
    """Per-round record of one game; row ``t - 1`` holds round ``t``."""

    loss: np.ndarray
    cum_loss: np.ndarray
    comparator: np.ndarray
    regret: np.ndarray
    losses: np.ndarray  # adversary vectors, one row per round
    decisions: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def T(self) -> int:
        return len(self.loss)


def _check_legal(adversary: Adversary, z: np.ndarray, setting: str) -> None:
    if setting == HEDGE:
        if np.any(z < 0.0) or np.any(z > 1.0):
            raise ValueError(f"{adversary.name} emitted a loss outside [0, 1]: {z}")
        space = getattr(adversary, "space", None)
        if space is not None and tuple(z) not in set(space.vectors):
            raise ValueError(f"{adversary.name} emitted a vector outside its loss space")
    elif float(z @ z) > (1.0 + 1e-12) ** 2:
        raise ValueError(f"{adversary.name} emitted a point outside the unit ball")


def run_game(learner: Learner, adversary: Adversary, T: int, seed=0,
             realized: bool = False) -> RegretTrace:
    """Play ``T`` rounds.

    ``seed`` (an int or ``SeedSequence``) is split into independent streams for
    the adversary and the learner, so an oblivious adversary produces the same
    sequence whichever learner it faces.  With ``realized=True`` a Hedge
    learner's loss is that of an action sampled each round instead of the
    expected loss of its distribution.
    """
    if learner.setting != adversary.setting:
        raise SettingMismatch(
            f"learner plays the {learner.setting} game but adversary the {adversary.setting} game"
        )
    if learner.N != adversary.N:
        raise SettingMismatch("learner and adversary disagree on the dimension")
    if realized and learner.setting != HEDGE:
        raise ValueError("realized losses apply to Hedge learners only")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    adv_ss, learner_ss, action_ss = ss.spawn(3)
    adversary.reset(np.random.default_rng(adv_ss))
    learner.seed(np.random.default_rng(learner_ss))
    action_rng = np.random.default_rng(action_ss)

    N = learner.N
    loss = np.empty(T)
    decisions = np.empty((T, N))
    zs = np.empty((T, N))
    for i in range(T):
        t = i + 1
        x = np.asarray(learner.decide(), dtype=float)
        z = np.asarray(adversary.loss(t, x, learner.M.copy()), dtype=float)
        _check_legal(adversary, z, learner.setting)
        if realized:
            loss[i] = z[learner.sample(action_rng)]
        else:
            loss[i] = float(x @ z)
        decisions[i] = x
        zs[i] = z
        learner.update(z)
    cum = np.cumsum(loss)
    W = np.cumsum(zs, axis=0)
    if learner.setting == HEDGE:
        comparator = W.min(axis=1)
    else:
        comparator = -np.linalg.norm(W, axis=1)
    meta = {"learner": learner.describe(), "adversary": adversary.describe(),
            "seed": str(seed) if isinstance(seed, np.random.SeedSequence) else seed}
    return RegretTrace(loss, cum, comparator, cum - comparator, zs, decisions, meta)


@dataclass(frozen=True)
class TrialBatchConfig:
    """A set of learners each run against the same per-trial adversary draws.

    ``learners`` holds learner configs, each with an ``id`` label.
    """

    learners: tuple
    adversary: dict
    N: int
    T: int
    trials: int
    seed: int = 0
    workers: int = 1
    rounds: tuple | None = None
    realized: bool = False

    def learner_ids(self) -> list[str]:
        ids = []
        for i, cfg in enumerate(self.learners):
            if isinstance(cfg, dict) and cfg.get("id"):
                ids.append(str(cfg["id"]))
            else:
                name = cfg["name"] if isinstance(cfg, dict) else str(cfg).split(":")[0]
                ids.append(f"{name}#{i}")
        if len(set(ids)) != len(ids):
            raise ValueError("learner ids must be unique")
        return ids


def _trial_regrets(config: TrialBatchConfig, trial: int) -> np.ndarray:
    out = np.empty((len(config.learners), config.T))
    ss = np.random.SeedSequence([config.seed, trial])
    for j, cfg in enumerate(config.learners):
        learner = make_learner(cfg, config.N)
        adversary = make_adversary(config.adversary, config.N)
        out[j] = run_game(learner, adversary, config.T, ss, realized=config.realized).regret
    return out


def _chunk_max(args) -> np.ndarray:
    config, trials = args
    best = None
    for trial in trials:
        r = _trial_regrets(config, trial)
        best = r if best is None else np.maximum(best, r)
    return best


def max_regret_curve(config: TrialBatchConfig) -> dict[str, np.ndarray]:
    """Per learner, the maximum over trials of the regret at every round.

    Trial ``k`` draws from ``SeedSequence([seed, k])``, and the reduction is an
    elementwise max, so the result does not depend on ``workers``.
    """
    if config.trials < 1:
        raise ValueError("need at least one trial")
    ids = config.learner_ids()
    trials = list(range(config.trials))
    workers = max(1, min(int(config.workers), config.trials))
    chunks = [trials[i::workers] for i in range(workers)]
    if workers == 1:
        parts = [_chunk_max((config, chunks[0]))]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_max, [(config, c) for c in chunks]))
    best = parts[0]
    for p in parts[1:]:
        best = np.maximum(best, p)
    rounds = np.arange(1, config.T + 1) if config.rounds is None else np.asarray(config.rounds)
    return {lid: best[j, rounds - 1] for j, lid in enumerate(ids)} | {"_rounds": rounds}


def exhaustive_adversary_search(learner: Learner, space: FiniteLossSpace, T: int,
                                budget: int = 2_000_000):
    """Worst final regret of a deterministic learner over all ``|space|^T`` sequences."""
    if learner.randomized:
        raise TypeError("exhaustive search needs a deterministic learner")
    if learner.setting != HEDGE or learner.N != space.N:
        raise SettingMismatch("learner does not play Hedge over this loss space")
    if len(space) ** T > budget:
        raise SearchBudgetExceeded(f"{len(space)}^{T} sequences exceed the budget {budget}")
    Z = space.matrix
    best = [-np.inf, None]

    def dfs(node: Learner, L: float, seq: list):
        if len(seq) == T:
            reg = L - float(node.M.min())
            if reg > best[0]:
                best[0], best[1] = reg, [z.copy() for z in seq]
            return
        P = node.decide()
        for k, z in enumerate(Z):
            child = node if k == len(Z) - 1 else copy.deepcopy(node)
            child.update(z)
            seq.append(z)
            dfs(child, L + float(P @ z), seq)
            seq.pop()

    dfs(copy.deepcopy(learner), 0.0, [])
    return best[0], np.asarray(best[1])


TRACE_COLUMNS = ("round", "learner_id", "trial_id", "loss", "cum_loss", "comparator", "regret")
BATCH_COLUMNS = ("round", "learner_id", "max_regret")


def _fmt(x: float) -> str:
    return repr(float(x))


def _metadata_line(meta: dict | None) -> str:
    meta = dict(meta or {})
    meta.setdefault("generated", time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()))
    return "# " + json.dumps(meta, sort_keys=True) + "\n"


def write_traces_csv(traces, path, metadata: dict | None = None) -> None:
    """``traces`` is an iterable of ``(learner_id, trial_id, RegretTrace)``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(_metadata_line(metadata))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for lid, trial, tr in traces:
            for i in range(tr.T):
                w.writerow([i + 1, lid, trial, _fmt(tr.loss[i]), _fmt(tr.cum_loss[i]),
                            _fmt(tr.comparator[i]), _fmt(tr.regret[i])])


def batch_metadata(config: TrialBatchConfig) -> dict:
    meta = {
        "adversary": config.adversary,
        "learners": list(config.learners),
        "N": config.N,
        "T": config.T,
        "trials": config.trials,
        "seed": config.seed,
        "sequences": SHARED_NOTE,
    }
    name = config.adversary.get("name") if isinstance(config.adversary, dict) else config.adversary
    if name in ("sphere", "ball"):
        meta["adversary_note"] = SPHERE_NOTE if name == "sphere" else "ball adversary draws points uniformly in the unit ball"
    return meta


def write_batch_csv(table: dict, path, metadata: dict | None = None) -> None:
    rounds = table["_rounds"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(_metadata_line(metadata))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BATCH_COLUMNS)
        for lid, values in table.items():
            if lid == "_rounds":
                continue
            for r, v in zip(rounds, values):
                w.writerow([int(r), lid, _fmt(v)])


def read_batch_csv(path) -> tuple[dict, dict]:
    """Return ``(metadata, {learner_id: (rounds, max_regret)})``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    meta = {}
    lines = text.splitlines(keepends=True)
    if lines and lines[0].startswith("#"):
        meta = json.loads(lines[0][1:])
        lines = lines[1:]
    reader = csv.DictReader(io.StringIO("".join(lines)))
    if tuple(reader.fieldnames or ()) != BATCH_COLUMNS:
        raise ValueError(f"expected columns {BATCH_COLUMNS}, got {reader.fieldnames}")
    series: dict = {}
    for row in reader:
        r, v = series.setdefault(row["learner_id"], ([], []))
        r.append(int(row["round"]))
        v.append(float(row["max_regret"]))
    return meta, {k: (np.asarray(r), np.asarray(v)) for k, (r, v) in series.items()}
