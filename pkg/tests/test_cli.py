import csv
import json
import math
import xml.etree.ElementTree as ET

import pytest

from horizonfree import acceptance
from horizonfree.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_value_table(capsys):
    code, out, _ = run(capsys, "value", "--n", "2", "--t", "4")
    assert code == EXIT_OK
    rows = list(csv.reader(out.strip().splitlines()))
    assert rows[0][:3] == ["T", "V(0,T)", "R(0,T)"]
    last = dict(zip(rows[0], rows[-1]))
    assert float(last["V(0,T)"]) == pytest.approx(0.75)
    assert float(last["S(T)"]) == pytest.approx(0.75)


def test_value_with_bound_and_out(capsys, tmp_path):
    code, out, _ = run(capsys, "value", "--n", "3", "--t", "6", "--bound", "pretend_hedge",
                       "--out", str(tmp_path))
    assert code == EXIT_OK
    assert list(tmp_path.iterdir())


def test_value_zero_horizon(capsys):
    code, out, _ = run(capsys, "value", "--t", "0")
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1].startswith("0,")


def test_value_errors(capsys):
    assert run(capsys, "value", "--n", "1")[0] == EXIT_CONFIG
    assert run(capsys, "value", "--n", "5", "--t", "40", "--state-budget", "10")[0] == EXIT_BUDGET


def test_solve_lower_bound(capsys):
    code, out, _ = run(capsys, "solve", "--lower-bound", "--t0", "60")
    assert code == EXIT_OK
    assert abs(float(out.splitlines()[0].split()[-1]) - math.sqrt(2)) < 1e-6


def test_solve_example(capsys):
    code, out, _ = run(capsys, "solve", "--example", "appendix-g-1")
    assert code == EXIT_OK
    assert "17/36" in out and "1/2" in out


def test_solve_compare_spaces(capsys):
    assert run(capsys, "solve", "--compare-spaces", "--n", "3", "--t", "3")[0] == EXIT_OK


def test_solve_budget(capsys):
    code = run(capsys, "solve", "--compare-spaces", "--n", "4", "--t", "6", "--node-budget", "5")[0]
    assert code == EXIT_BUDGET


def _bench_cfg(**kw):
    cfg = {"schema": 1, "N": 3, "T": 10, "trials": 1, "seed": 1, "adversary": "sphere",
           "learners": [{"name": "ball_adaptive", "id": "ada"}, {"name": "ogd_ball", "id": "ogd"}]}
    cfg.update(kw)
    return cfg


def test_bench_smoke(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(_bench_cfg()))
    code, out, _ = run(capsys, "bench", "--config", str(path), "--out", str(tmp_path))
    assert code == EXIT_OK
    lines = (tmp_path / "max_regret.csv").read_text().splitlines()
    rows = list(csv.DictReader(lines[1:]))
    assert sum(r["learner_id"] == "ada" for r in rows) == 10
    assert sum(r["learner_id"] == "ogd" for r in rows) == 10
    root = ET.parse(tmp_path / "max_regret.svg").getroot()
    assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 2


@pytest.mark.parametrize("bad", [
    {"schema": 2},
    {"T": 0},
    {"surprise": True},
    {"learners": [{"name": "nope"}]},
    {"learners": [{"name": "pretend_prior_hedge"}]},  # Hedge learner vs ball adversary
    {"rounds": [11]},
    {"learners": [{"name": "ogd_ball", "id": "a"}, {"name": "ball_adaptive", "id": "a"}]},
])
def test_bench_config_errors(capsys, tmp_path, bad):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(_bench_cfg(**bad)))
    code, _, err = run(capsys, "bench", "--config", str(path), "--out", str(tmp_path))
    assert code == EXIT_CONFIG
    assert "config" in err


def test_bench_unreadable(capsys, tmp_path):
    assert run(capsys, "bench", "--config", str(tmp_path / "missing.json"))[0] == EXIT_CONFIG
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(capsys, "bench", "--config", str(p))[0] == EXIT_CONFIG


def test_plot(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(_bench_cfg()))
    run(capsys, "bench", "--config", str(path), "--out", str(tmp_path))
    code, _, _ = run(capsys, "plot", "--csv", str(tmp_path / "max_regret.csv"),
                     "--svg", str(tmp_path / "again.svg"), "--title", "t")
    assert code == EXIT_OK
    ET.parse(tmp_path / "again.svg")
    assert run(capsys, "plot", "--csv", str(tmp_path / "nope.csv"), "--svg", str(tmp_path / "y.svg"))[0] == EXIT_CONFIG


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == len(acceptance.CRITERIA) == 15


def test_verify_only(capsys):
    code, out, _ = run(capsys, "verify", "--only", "complemented-example", "--only", "lower-bound")
    assert code == EXIT_OK
    assert out.count("PASS") == 2


def test_verify_failure_exit(capsys):
    code, out, _ = run(capsys, "verify", "--only", "d-infinity-limit")
    assert code == EXIT_FAIL
    assert "FAIL" in out


def test_verify_unknown(capsys):
    assert run(capsys, "verify", "--only", "nope")[0] == EXIT_CONFIG
