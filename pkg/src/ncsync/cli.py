"""Command-line entry point: single simulations, sweeps, and fixture export."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiment, topology
from .sim import Scheme, SimConfig, make_store, run

SCHEME_FLAGS = {"u-dbs": Scheme.U_DBS, "c-dbs": Scheme.C_DBS, "c-dbs-ns": Scheme.C_DBS_NS}

FIXTURES = {
    "path3": lambda: topology.path_graph(3),
    "k3": lambda: topology.complete_graph(3),
    "k4": lambda: topology.complete_graph(4),
    "k5": lambda: topology.complete_graph(5),
    "star5": lambda: topology.star_graph(5),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncsync", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one simulation on a topology fixture")
    sim.add_argument("--topology", required=True, help="topology JSON file")
    sim.add_argument("--scheme", required=True, choices=sorted(SCHEME_FLAGS))
    sim.add_argument("--pe", type=float, default=0.0, help="per-hop packet error rate")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--payload-len", type=int, default=32)
    sim.add_argument("--max-slots", type=int, default=None)
    sim.add_argument("--trace", default=None, help="write JSONL event trace here")

    sw = sub.add_parser("sweep", help="run a Monte Carlo sweep from a config file")
    sw.add_argument("--config", required=True, help="sweep config (.toml or .json)")
    sw.add_argument("--out", required=True, help="output CSV path")
    sw.add_argument("--json", default=None, help="optional JSON mirror of the records")
    sw.add_argument("--progress", action="store_true", help="per-cell progress on stderr")

    fx = sub.add_parser("fixtures", help="emit built-in test topologies as JSON")
    fx.add_argument("--out", required=True, help="output directory")
    return p


def _cmd_simulate(parser, args) -> int:
    if not (0.0 <= args.pe <= 1.0):
        parser.error(f"--pe must be in [0, 1], got {args.pe}")
    try:
        t = topology.Topology.load(args.topology)
    except (OSError, ValueError, KeyError) as e:
        parser.error(f"--topology: cannot load {args.topology}: {e}")
    cfg = SimConfig(
        scheme=SCHEME_FLAGS[args.scheme],
        pe=args.pe,
        payload_len=args.payload_len,
        max_slots=args.max_slots,
        seed=args.seed,
        record_events=True,
    )
    store = make_store(t.n, cfg.payload_len, (cfg.seed, 1))
    res = run(t, cfg, store=store, rng=np.random.default_rng(np.random.SeedSequence(cfg.seed)))
    if args.trace:
        res.write_trace(args.trace)
    print(f"slots={res.slots} converged={'true' if res.converged else 'false'}")
    return 0


def _cmd_sweep(parser, args) -> int:
    try:
        cfg = experiment.load_sweep_config(args.config)
    except (OSError, ValueError, TypeError) as e:
        parser.error(f"--config: {e}")
    records = experiment.run_sweep(cfg, progress=args.progress)
    experiment.write_csv(records, args.out)
    if args.json:
        experiment.write_json(records, args.json)
    print(f"records={len(records)} out={args.out}")
    return 0


def _cmd_fixtures(parser, args) -> int:
    import os

    os.makedirs(args.out, exist_ok=True)
    for name, make in FIXTURES.items():
        make().save(os.path.join(args.out, f"{name}.json"))
    print(f"wrote {len(FIXTURES)} fixtures to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(parser, args)
    if args.command == "sweep":
        return _cmd_sweep(parser, args)
    return _cmd_fixtures(parser, args)


if __name__ == "__main__":
    sys.exit(main())
