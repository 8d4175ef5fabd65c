"""Command-line front end.

Exit status: 0 all checks pass, 1 a check failed, 2 configuration error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import acceptance, arena
from .learners import make_learner
from .priors import BoundSpec, eval_bound
from .solver import DEFAULT_NODE_BUDGET, ExactSolver, FiniteLossSpace, scaled_lower_bound
from .svgplot import plot_csv
from .values import DEFAULT_STATE_BUDGET, RandomWalkTable, StateBudgetExceeded, c_N, two_action_game_value

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3

SCHEMA_VERSION = 1

_LEARNER = {
    "oneOf": [
        {"type": "string", "minLength": 1},
        {"type": "object", "required": ["name"],
         "properties": {"name": {"type": "string"}, "id": {"type": "string"}}},
    ]
}

BENCH_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema", "learners", "adversary", "N", "T", "trials"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "learners": {"type": "array", "minItems": 1, "items": _LEARNER},
        "adversary": {
            "oneOf": [
                {"type": "string", "minLength": 1},
                {"type": "object", "required": ["name"], "properties": {"name": {"type": "string"}}},
            ]
        },
        "N": {"type": "integer", "minimum": 2},
        "T": {"type": "integer", "minimum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
        "rounds": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
        "realized": {"type": "boolean"},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "csv": {"type": "string", "minLength": 1},
                "svg": {"type": "string", "minLength": 1},
                "title": {"type": "string"},
            },
        },
    },
}


class ConfigError(ValueError):
    pass


def validate_config(cfg: dict) -> dict:
    """Schema check plus a dry construction of every learner and the adversary."""
    try:
        jsonschema.validate(cfg, BENCH_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None
    if cfg.get("rounds") and max(cfg["rounds"]) > cfg["T"]:
        raise ConfigError("rounds must not exceed T")
    adv = cfg["adversary"]
    adv = {"name": adv} if isinstance(adv, str) else adv
    try:
        setting = arena.make_adversary(adv, cfg["N"]).setting
        for lc in cfg["learners"]:
            if make_learner(lc, cfg["N"]).setting != setting:
                raise ConfigError(f"learner {lc} does not play the adversary's game")
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    cfg = dict(cfg, adversary=adv)
    try:
        arena.TrialBatchConfig(tuple(cfg["learners"]), adv, cfg["N"], cfg["T"], cfg["trials"]).learner_ids()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None


def run_bench(cfg: dict, out_dir, workers: int | None = None):
    """Run a validated bench config; returns the CSV and SVG paths."""
    cfg = validate_config(cfg)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    output = cfg.get("output", {})
    csv_path = out_dir / output.get("csv", "max_regret.csv")
    svg_path = out_dir / output.get("svg", "max_regret.svg")
    batch = acceptance.batch_config(cfg, workers or cfg.get("workers", 1))
    table = arena.max_regret_curve(batch)
    arena.write_batch_csv(table, csv_path, arena.batch_metadata(batch))
    plot_csv(csv_path, svg_path, output.get("title"))
    return csv_path, svg_path


# subcommands ------------------------------------------------------------------

def cmd_value(args) -> int:
    N, T = args.n, args.t
    if N < 2 or T < 0:
        print("need --n >= 2 and --t >= 0", file=sys.stderr)
        return EXIT_CONFIG
    spec = None
    if args.bound:
        try:
            spec = BoundSpec(args.bound, args.d, N, args.b)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    table = RandomWalkTable(args.state_budget)
    cols = ["T", "V(0,T)", "R(0,T)", "c_N*sqrt(T)", "V<=c_N*sqrt(T)"]
    if N == 2:
        cols.append("S(T)")
    if spec is not None:
        cols.append(f"{args.bound}_bound")
    rows = []
    try:
        for r in (range(1, T + 1) if T > 0 else [0]):
            V = table.V([0] * N, r)
            cap = c_N(N) * math.sqrt(r)
            row = [r, V, table.R([0] * N, r), cap, V <= cap + 1e-12]
            if N == 2:
                row.append(two_action_game_value(r) if r > 0 else 0.0)
            if spec is not None:
                row.append(eval_bound(spec, r) if r > 0 else 0.0)
            rows.append(row)
    except StateBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    w.writerows([_cell(x) for x in row] for row in rows)
    text = buf.getvalue()
    print(text, end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"value_N{N}_T{T}.csv").write_text(text, encoding="utf-8")
    return EXIT_OK if all(row[4] for row in rows) else EXIT_FAIL


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _report(checks) -> int:
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'}  {c.name}: {c.measured}  (expected {c.expected})")
    return EXIT_OK if all(c.ok for c in checks) else EXIT_FAIL


def _frac(x: float) -> str:
    return str(Fraction(x).limit_denominator(1000))


EXAMPLES = {
    "appendix-g-1": acceptance.complemented_example,
    "appendix-g-2": lambda: acceptance.last_round_failures()[:1],
    "appendix-g-3": lambda: acceptance.last_round_failures()[1:],
}


def cmd_solve(args) -> int:
    if not (args.lower_bound or args.example or args.compare_spaces):
        print("choose --lower-bound, --example or --compare-spaces", file=sys.stderr)
        return EXIT_CONFIG
    checks = []
    try:
        if args.lower_bound:
            val = scaled_lower_bound(args.t0, args.method)
            print(f"scaled lower bound (T0={args.t0}, {args.method}) = {val!r}")
            checks.append(acceptance.Check("bound >= sqrt(2)", val >= math.sqrt(2.0) - 1e-12,
                                           f"{val:.10f}", f">= {math.sqrt(2.0):.10f}"))
            if args.method == "partial_sum" and args.t0 >= 60:
                checks.append(acceptance._close("bound near sqrt(2)", val, math.sqrt(2.0), 1e-6))
        if args.example:
            if args.example == "appendix-g-1":
                from .priors import FinitePrior
                from .solver import fixed_horizon_mixture, random_horizon_value

                space = FiniteLossSpace.complemented_basis(3)
                prior = FinitePrior((3, 4), (0.5, 0.5))
                mix, mix_val = fixed_horizon_mixture(space, prior, 3, (1, 1, 2), args.node_budget)
                star = random_horizon_value(space, prior, 3, (1, 1, 2), args.node_budget)
                print("E[P^T | T >= 3] = (" + ", ".join(_frac(p) for p in mix) + f"), E[V] = {_frac(mix_val)}")
                print("P* = (" + ", ".join(_frac(p) for p in star.distribution) + f"), V' = {_frac(star.value)}")
            checks += EXAMPLES[args.example]()
        if args.compare_spaces:
            N, T = args.n, args.t
            a = ExactSolver(FiniteLossSpace.basis(N), args.node_budget).value([0] * N, T)
            b = ExactSolver(FiniteLossSpace.binary(N), args.node_budget).value([0] * N, T)
            equal = abs(a - b) <= 1e-9
            print(f"N={N} T={T}: basis {a!r}, binary {b!r}, equal={str(equal).lower()}")
            if N == 2:
                checks.append(acceptance.Check("values equal for N=2", equal, f"{a:.12f} vs {b:.12f}", "equal"))
            elif T > 0:
                checks.append(acceptance.Check("basis value strictly smaller", b - a > 1e-6,
                                               f"{a:.12f} < {b:.12f}", "margin > 1e-6"))
    except StateBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return _report(checks)


def cmd_bench(args) -> int:
    try:
        cfg = load_config(args.config)
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        for key in ("seed", "trials", "n", "t"):
            val = getattr(args, key)
            if val is not None:
                cfg[{"n": "N", "t": "T"}.get(key, key)] = val
        validate_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    csv_path, svg_path = run_bench(cfg, args.out, args.workers)
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        for c in acceptance.CRITERIA:
            print(f"{c.id}\t{c.title}")
        return EXIT_OK
    try:
        chosen = acceptance.select(args.only)
    except KeyError as exc:
        print(f"config error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    failed = 0
    for c in chosen:
        res = acceptance.run_criterion(c)
        print(res.line(), flush=True)
        if args.verbose:
            for k in res.checks:
                print(f"      {'ok ' if k.ok else 'BAD'} {k.name}: {k.measured} (expected {k.expected})")
        failed += not res.passed
    print(f"{len(chosen) - failed}/{len(chosen)} criteria passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_plot(args) -> int:
    try:
        plot_csv(args.csv, args.svg, args.title)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"wrote {args.svg}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="horizonfree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("value", help="tables of V(0,T), R(0,T), c_N sqrt(T) and S(T)")
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--t", type=int, default=10)
    v.add_argument("--bound", choices=["pretend_hedge", "ball", "fpl", "exp_weights", "first_order"],
                   help="add a regret-bound column")
    v.add_argument("--d", type=float, default=2.35)
    v.add_argument("--b", type=float, default=None)
    v.add_argument("--out", help="directory for a CSV copy of the table")
    v.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET)
    v.set_defaults(func=cmd_value)

    s = sub.add_parser("solve", help="exact game solves with golden-value checks")
    s.add_argument("--lower-bound", action="store_true")
    s.add_argument("--t0", type=int, default=60)
    s.add_argument("--method", choices=["partial_sum", "closed_form", "recursion"], default="partial_sum")
    s.add_argument("--example", choices=sorted(EXAMPLES))
    s.add_argument("--compare-spaces", action="store_true")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--t", type=int, default=4)
    s.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="max-regret curves from a JSON config, as CSV and SVG")
    b.add_argument("--config", required=True)
    b.add_argument("--out", default=".")
    b.add_argument("--seed", type=int)
    b.add_argument("--trials", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--workers", type=int)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("verify", help="run the acceptance criteria")
    r.add_argument("--only", action="append", metavar="ID")
    r.add_argument("--list", action="store_true")
    r.add_argument("-v", "--verbose", action="store_true")
    r.set_defaults(func=cmd_verify)

    g = sub.add_parser("plot", help="re-render a max-regret CSV as SVG")
    g.add_argument("--csv", required=True)
    g.add_argument("--svg", required=True)
    g.add_argument("--title")
    g.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StateBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
