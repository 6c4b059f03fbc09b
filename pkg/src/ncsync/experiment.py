"""Monte Carlo sweep harness: slots, relative processing gain, operation counts.

Each (node count, radius) cell draws `samples_per_cell` connected topologies;
all three schemes run on every topology sample (paired by sample index, with
independent loss realizations per scheme). Samples are bucketed by measured
average degree and aggregated per (scheme, n, pe, bucket).
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .codec import BlockStore
from .selection import DEFAULT_SEARCH_CAP
from .sim import Scheme, SimConfig, run
from .topology import TopologyGenerationError, generate_connected

SCHEMES = (Scheme.U_DBS, Scheme.C_DBS, Scheme.C_DBS_NS)

REJECTION_CAP = 10_000

CSV_HEADER = "scheme,n,pe,degree_bucket,n_samples,mean_slots,mean_rpg,mean_ops,convergence_rate"


@dataclass
class SweepConfig:
    node_sizes: list[int]
    pe_values: list[float]
    radius_grid: list[float]
    samples_per_cell: int = 1000
    root_seed: int = 0
    degree_bucket_width: float = 0.5
    payload_len: int = 32
    max_slots: Optional[int] = None
    search_cap: int = DEFAULT_SEARCH_CAP

    def __post_init__(self):
        if not self.node_sizes or not self.pe_values or not self.radius_grid:
            raise ValueError("node_sizes, pe_values and radius_grid must be nonempty")
        if self.samples_per_cell < 1:
            raise ValueError("samples_per_cell must be >= 1")
        for pe in self.pe_values:
            if not (0.0 <= pe <= 1.0):
                raise ValueError(f"pe must be in [0, 1], got {pe}")


@dataclass(frozen=True)
class SampleResult:
    """All scheme/pe runs for one topology sample."""

    n: int
    radius_index: int
    sample_index: int
    avg_degree: float
    bucket: float
    # (scheme name, pe index) -> (slots, converged, op_count)
    runs: dict[tuple[str, int], tuple[int, bool, int]]


@dataclass(frozen=True)
class ExperimentRecord:
    scheme: str
    n: int
    pe: float
    degree_bucket: float
    n_samples: int
    mean_slots: float
    mean_rpg: Optional[float]  # None for U_DBS
    mean_ops: float
    convergence_rate: float


def degree_bucket(avg_degree: Fraction, width: float) -> float:
    w = Fraction(width)
    return float(math.floor(avg_degree / w) * w)


def compute_sd(samples: Sequence[int]) -> float:
    """Arithmetic mean of slot counts."""
    if not samples:
        raise ValueError("no samples")
    return math.fsum(samples) / len(samples)


def compute_gd(pairs: Sequence[tuple[int, int]]) -> float:
    """Mean over samples of uncoded/coded slot ratio (mean of ratios)."""
    if not pairs:
        raise ValueError("no pairs")
    return math.fsum(u / c for u, c in pairs) / len(pairs)


def _run_cell(cfg: SweepConfig, n: int, radius_index: int) -> list[SampleResult]:
    radius = cfg.radius_grid[radius_index]
    out: list[SampleResult] = []
    for i in range(cfg.samples_per_cell):
        topo_rng = np.random.default_rng(
            np.random.SeedSequence([cfg.root_seed, 1, n, radius_index, i])
        )
        try:
            t = generate_connected(n, radius, topo_rng, REJECTION_CAP)
        except TopologyGenerationError:
            return []  # cell marked empty
        store_rng = np.random.default_rng(
            np.random.SeedSequence([cfg.root_seed, 2, n, radius_index, i])
        )
        store = BlockStore.random(n, cfg.payload_len, store_rng)
        deg = t.average_degree()
        runs: dict[tuple[str, int], tuple[int, bool, int]] = {}
        for pe_idx, pe in enumerate(cfg.pe_values):
            for s_idx, scheme in enumerate(SCHEMES):
                rng = np.random.default_rng(
                    np.random.SeedSequence(
                        [cfg.root_seed, 3, n, radius_index, i, s_idx, pe_idx]
                    )
                )
                res = run(
                    t,
                    SimConfig(
                        scheme=scheme,
                        pe=pe,
                        payload_len=cfg.payload_len,
                        max_slots=cfg.max_slots,
                        search_cap=cfg.search_cap,
                        record_events=False,
                    ),
                    store=store,
                    rng=rng,
                )
                runs[(scheme.name, pe_idx)] = (res.slots, res.converged, res.op_count)
        out.append(
            SampleResult(
                n=n,
                radius_index=radius_index,
                sample_index=i,
                avg_degree=float(deg),
                bucket=degree_bucket(deg, cfg.degree_bucket_width),
                runs=runs,
            )
        )
    return out


def _max_workers() -> int:
    env = os.environ.get("NCSYNC_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_samples(cfg: SweepConfig, progress: bool = False) -> list[SampleResult]:
    """All per-sample results, in deterministic (n, radius, sample) order."""
    cells = [(n, ri) for n in cfg.node_sizes for ri in range(len(cfg.radius_grid))]
    workers = min(_max_workers(), len(cells))
    results: list[SampleResult] = []
    if workers <= 1:
        for k, (n, ri) in enumerate(cells):
            results.extend(_run_cell(cfg, n, ri))
            if progress:
                print(f"cell {k + 1}/{len(cells)} done (n={n}, r={cfg.radius_grid[ri]})",
                      file=sys.stderr)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_cell, cfg, n, ri) for n, ri in cells]
            for k, fut in enumerate(futs):  # submission order keeps the reduce stable
                results.extend(fut.result())
                if progress:
                    print(f"cell {k + 1}/{len(cells)} done", file=sys.stderr)
    return results


def aggregate(cfg: SweepConfig, samples: Sequence[SampleResult]) -> list[ExperimentRecord]:
    groups: dict[tuple[int, int, int, float], list[SampleResult]] = {}
    for s in samples:
        for pe_idx in range(len(cfg.pe_values)):
            groups.setdefault((0, s.n, pe_idx, s.bucket), []).append(s)
    records: list[ExperimentRecord] = []
    for s_idx, scheme in enumerate(SCHEMES):
        for (_, n, pe_idx, bucket), members in groups.items():
            key = (scheme.name, pe_idx)
            total = len(members)
            conv = [m for m in members if m.runs[key][1]]
            if not conv:
                continue
            mean_slots = compute_sd([m.runs[key][0] for m in conv])
            mean_ops = compute_sd([m.runs[key][2] for m in conv])
            mean_rpg = None
            if scheme.coded:
                ukey = (Scheme.U_DBS.name, pe_idx)
                pairs = [
                    (m.runs[ukey][0], m.runs[key][0])
                    for m in members
                    if m.runs[ukey][1] and m.runs[key][1]
                ]
                if pairs:
                    mean_rpg = compute_gd(pairs)
            records.append(
                ExperimentRecord(
                    scheme=scheme.name,
                    n=n,
                    pe=cfg.pe_values[pe_idx],
                    degree_bucket=bucket,
                    n_samples=total,
                    mean_slots=mean_slots,
                    mean_rpg=mean_rpg,
                    mean_ops=mean_ops,
                    convergence_rate=len(conv) / total,
                )
            )
    scheme_order = {s.name: i for i, s in enumerate(SCHEMES)}
    records.sort(key=lambda r: (scheme_order[r.scheme], r.n, r.pe, r.degree_bucket))
    return records


def run_sweep(cfg: SweepConfig, progress: bool = False) -> list[ExperimentRecord]:
    return aggregate(cfg, run_samples(cfg, progress=progress))


def write_csv(records: Sequence[ExperimentRecord], path) -> None:
    try:
        with open(path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(CSV_HEADER.split(","))
            for r in records:
                w.writerow(
                    [
                        r.scheme,
                        r.n,
                        "%g" % r.pe,
                        str(float(r.degree_bucket)),
                        r.n_samples,
                        "%.6f" % r.mean_slots,
                        "" if r.mean_rpg is None else "%.6f" % r.mean_rpg,
                        "%.6f" % r.mean_ops,
                        "%.6f" % r.convergence_rate,
                    ]
                )
    except OSError as e:
        raise OSError(f"cannot write CSV to {path}: {e}") from e


def write_json(records: Sequence[ExperimentRecord], path) -> None:
    with open(path, "w") as f:
        json.dump([asdict(r) for r in records], f, indent=1)
        f.write("\n")


def load_sweep_config(path) -> SweepConfig:
    path = str(path)
    if path.endswith(".toml"):
        try:
            import tomllib as toml  # py >= 3.11
        except ImportError:
            import tomli as toml
        with open(path, "rb") as f:
            data = toml.load(f)
    else:
        with open(path) as f:
            data = json.load(f)
    allowed = set(SweepConfig.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown sweep config keys: {sorted(unknown)}")
    return SweepConfig(**data)


def bootstrap_mean_quantile(
    values: Sequence[float], q: float, n_boot: int = 2000, seed: int = 0
) -> float:
    """Quantile of the bootstrap distribution of the mean (deterministic)."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("no values")
    rng = np.random.default_rng(np.random.SeedSequence([seed, arr.size]))
    idx = rng.integers(0, arr.size, size=(n_boot, arr.size))
    return float(np.quantile(arr[idx].mean(axis=1), q))
