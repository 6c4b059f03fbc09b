#!/usr/bin/env python3
"""Render figures from a sweep results CSV.

Kinds:
  slots - mean time slots vs degree bucket, one line per scheme
  rpg   - mean relative processing gain vs degree bucket (coded schemes)
  ops   - mean operation count vs network size, one line per scheme

Pure post-processing: numbers come straight from the CSV, nothing is
recomputed. Example:

  python plots/plot.py --csv results.csv --kind slots --n 8 --pe 0.1 --out fig3b.png
"""

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

SCHEMES = ["U_DBS", "C_DBS", "C_DBS_NS"]
LABELS = {"U_DBS": "U-DBS", "C_DBS": "C-DBS", "C_DBS_NS": "C-DBS-NS"}
COLORS = {"U_DBS": "tab:green", "C_DBS": "tab:blue", "C_DBS_NS": "tab:red"}

REQUIRED = ["scheme", "n", "pe", "degree_bucket", "n_samples", "mean_slots",
            "mean_rpg", "mean_ops", "convergence_rate"]


def load_rows(path):
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        missing = [c for c in REQUIRED if c not in (reader.fieldnames or [])]
        if missing:
            raise SystemExit(f"error: CSV {path} lacks columns {missing}")
        return list(reader)


def filter_rows(rows, n=None, pe=None):
    out = []
    for r in rows:
        if n is not None and int(r["n"]) != n:
            continue
        if pe is not None and float(r["pe"]) != pe:
            continue
        out.append(r)
    return out


def series_by_bucket(rows, scheme, value_col):
    pts = sorted(
        (float(r["degree_bucket"]), float(r[value_col]))
        for r in rows
        if r["scheme"] == scheme and r[value_col] != ""
    )
    return [p[0] for p in pts], [p[1] for p in pts]


def render_slots(rows, ax):
    for scheme in SCHEMES:
        x, y = series_by_bucket(rows, scheme, "mean_slots")
        ax.plot(x, y, marker="o", label=LABELS[scheme], color=COLORS[scheme])
    ax.set_xlabel("average degree")
    ax.set_ylabel("mean time slots")


def render_rpg(rows, ax):
    for scheme in ("C_DBS", "C_DBS_NS"):
        x, y = series_by_bucket(rows, scheme, "mean_rpg")
        ax.plot(x, y, marker="o", label=LABELS[scheme], color=COLORS[scheme])
    ax.set_xlabel("average degree")
    ax.set_ylabel("mean relative processing gain")


def render_ops(rows, ax):
    for scheme in SCHEMES:
        per_n = {}
        for r in rows:
            if r["scheme"] != scheme:
                continue
            w = int(r["n_samples"])
            acc = per_n.setdefault(int(r["n"]), [0.0, 0])
            acc[0] += float(r["mean_ops"]) * w
            acc[1] += w
        xs = sorted(per_n)
        ys = [per_n[n][0] / per_n[n][1] for n in xs]
        ax.plot(xs, ys, marker="o", label=LABELS[scheme], color=COLORS[scheme])
    ax.set_xlabel("network size (nodes)")
    ax.set_ylabel("mean operation count")
    ax.set_yscale("log")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--csv", required=True)
    p.add_argument("--kind", required=True, choices=["slots", "rpg", "ops"])
    p.add_argument("--n", type=int, default=None, help="network size filter")
    p.add_argument("--pe", type=float, default=None, help="packet error rate filter")
    p.add_argument("--out", required=True, help="output image path")
    args = p.parse_args(argv)

    rows = load_rows(args.csv)
    n = args.n if args.kind != "ops" else None
    rows = filter_rows(rows, n=n, pe=args.pe)
    if not rows:
        raise SystemExit(
            f"error: no rows match filter n={args.n} pe={args.pe} in {args.csv}"
        )

    fig, ax = plt.subplots(figsize=(6, 4))
    {"slots": render_slots, "rpg": render_rpg, "ops": render_ops}[args.kind](rows, ax)
    title = {"slots": "Time slots to synchronize", "rpg": "Relative processing gain",
             "ops": "Computational cost"}[args.kind]
    bits = [title]
    if n is not None:
        bits.append(f"N={args.n}")
    if args.pe is not None:
        bits.append(f"Pe={args.pe:g}")
    ax.set_title(", ".join(bits))
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
