#!/usr/bin/env python3
"""Benchmark the hot kernels with and without the numba backend.

Runs the same workload twice in subprocesses: once with the compiled
kernels and once with NCSYNC_NO_NUMBA=1 (pure-Python/numpy semantics of
the identical source), then prints a side-by-side comparison. Compile
time is excluded by a warmup pass inside each subprocess.

Usage: python scripts/bench_kernels.py [--repeats 3] [--samples 40]
"""

import argparse
import json
import os
import subprocess
import sys
from pathlib import Path

WORKER = r"""
import json, sys, time
import numpy as np
from ncsync import USING_NUMBA
from ncsync.experiment import SweepConfig, run_samples

repeats, samples = int(sys.argv[1]), int(sys.argv[2])
cfg = SweepConfig(
    node_sizes=[8, 11],
    pe_values=[0.0, 0.1],
    radius_grid=[0.5, 0.8],
    samples_per_cell=samples,
    root_seed=4242,
)
run_samples(cfg)  # warmup: triggers JIT compilation when numba is active
times = []
for _ in range(repeats):
    t0 = time.perf_counter()
    out = run_samples(cfg)
    times.append(time.perf_counter() - t0)
total_runs = sum(len(s.runs) for s in out)
print(json.dumps({
    "numba": USING_NUMBA,
    "best_s": min(times),
    "all_s": times,
    "sim_runs": total_runs,
}))
"""


def run_variant(no_numba, repeats, samples):
    env = dict(os.environ, NCSYNC_THREADS="1")
    if no_numba:
        env["NCSYNC_NO_NUMBA"] = "1"
    else:
        env.pop("NCSYNC_NO_NUMBA", None)
    r = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeats), str(samples)],
        capture_output=True, text=True, env=env,
        cwd=str(Path(__file__).resolve().parents[1]),
    )
    if r.returncode != 0:
        raise SystemExit(f"benchmark worker failed:\n{r.stderr}")
    return json.loads(r.stdout.splitlines()[-1])


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--samples", type=int, default=40,
                   help="topology samples per sweep cell")
    args = p.parse_args()

    fast = run_variant(False, args.repeats, args.samples)
    slow = run_variant(True, args.repeats, args.samples)
    if not fast["numba"] or slow["numba"]:
        raise SystemExit("backend selection failed; check NCSYNC_NO_NUMBA handling")

    runs = fast["sim_runs"]
    print(f"workload: {runs} simulation runs per repeat, best of {args.repeats}")
    for name, d in (("numba", fast), ("pure-python fallback", slow)):
        print(f"  {name:22s} {d['best_s']:8.3f} s  "
              f"({runs / d['best_s']:8.1f} runs/s)")
    print(f"speedup: {slow['best_s'] / fast['best_s']:.1f}x")


if __name__ == "__main__":
    main()
