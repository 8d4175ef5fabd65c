"""
Anytime ball learner against fixed-horizon baselines
====================================================

Runs the max-regret benchmark of configs/figure1.json (N=10, points drawn
on the unit sphere).  The full run is 200 trials of 1000 rounds; pass a
smaller trial count as the first argument for a quick look.
"""

import json
import sys
from pathlib import Path

from horizonfree.arena import read_batch_csv
from horizonfree.cli import run_bench

root = Path(__file__).resolve().parents[1]
cfg = json.loads((root / "configs" / "figure1.json").read_text())
if len(sys.argv) > 1:
    cfg["trials"] = int(sys.argv[1])

csv_path, svg_path = run_bench(cfg, root / "demos" / "out", workers=4)
_, series = read_batch_csv(csv_path)
for t in (100, 300, 1000):
    row = "  ".join(f"{k}={v[t - 1]:7.2f}" for k, (r, v) in series.items())
    print(f"t={t:<5d} {row}")
print("plot:", svg_path)
