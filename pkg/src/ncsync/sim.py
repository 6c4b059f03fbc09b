"""Slot-level state machine for the three synchronization schemes.

U-DBS and C-DBS take turns in ascending node order; a node whose selection
comes back empty is skipped without consuming a slot. C-DBS-NS instead picks
the transmitter each slot via node selection. The loop runs until every node
holds every block or the slot cap is hit.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._kernels import broadcast_and_apply, dbs_search, ns_search
from .codec import DEFAULT_PAYLOAD_LEN, BlockStore, KnowledgeSet
from .selection import DEFAULT_SEARCH_CAP
from .topology import Topology


class Scheme(enum.Enum):
    U_DBS = "U_DBS"
    C_DBS = "C_DBS"
    C_DBS_NS = "C_DBS_NS"

    @property
    def cyclic(self) -> bool:
        return self is not Scheme.C_DBS_NS

    @property
    def coded(self) -> bool:
        return self is not Scheme.U_DBS


class CodecCorruptionError(RuntimeError):
    """A decoded payload did not byte-match the original block."""


@dataclass
class SimConfig:
    scheme: Scheme
    pe: float = 0.0
    payload_len: int = DEFAULT_PAYLOAD_LEN
    max_slots: Optional[int] = None  # default 10 * n^2
    seed: int = 0
    search_cap: int = DEFAULT_SEARCH_CAP
    record_events: bool = True

    def __post_init__(self):
        if isinstance(self.scheme, str):
            self.scheme = Scheme[self.scheme]
        if not (0.0 <= self.pe <= 1.0):
            raise ValueError(f"pe must be in [0, 1], got {self.pe}")
        if self.max_slots is not None and self.max_slots < 1:
            raise ValueError("max_slots must be >= 1")


@dataclass(frozen=True)
class ReceiverOutcome:
    rx: int
    kind: str  # "lost" | "already_known" | "decoded" | "undecodable"
    block: Optional[int] = None  # decoded block id
    unknown_count: Optional[int] = None

    def result_str(self) -> str:
        if self.kind == "decoded":
            return f"decoded:{self.block}"
        if self.kind == "undecodable":
            return f"undecodable:{self.unknown_count}"
        return self.kind


@dataclass(frozen=True)
class SlotEvent:
    slot: int
    tx: int
    components: tuple[int, ...]
    outcomes: tuple[ReceiverOutcome, ...]

    def to_json_dict(self) -> dict:
        return {
            "slot": self.slot,
            "tx": self.tx,
            "components": list(self.components),
            "outcomes": [{"rx": o.rx, "result": o.result_str()} for o in self.outcomes],
        }


@dataclass
class SimResult:
    slots: int
    converged: bool
    events: list[SlotEvent]
    op_count: int
    final_knowledge: list[KnowledgeSet]

    def write_trace(self, path) -> None:
        with open(path, "w") as f:
            for ev in self.events:
                f.write(json.dumps(ev.to_json_dict()) + "\n")


_CODES = ("lost", "already_known", "decoded", "undecodable")


def make_store(n: int, payload_len: int, seed) -> BlockStore:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return BlockStore.random(n, payload_len, rng)


def run(
    t: Topology,
    cfg: SimConfig,
    store: Optional[BlockStore] = None,
    rng: Optional[np.random.Generator] = None,
) -> SimResult:
    """Run one simulation to convergence or the slot cap; fully deterministic
    given (topology, config, store, rng/seed)."""
    if not t.is_connected():
        raise ValueError("topology must be connected")
    n = t.n
    if store is None:
        store = make_store(n, cfg.payload_len, (cfg.seed, 1))
    if len(store) != n:
        raise ValueError(f"store must hold one block per node ({len(store)} != {n})")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    max_slots = cfg.max_slots if cfg.max_slots is not None else 10 * n * n

    matrix = store.matrix()
    know = np.int64(1) << np.arange(n, dtype=np.int64)  # seed own block
    adj = t.adj_masks.astype(np.int64)
    nbr_ids = [np.array(t.neighbors(i), dtype=np.int64) for i in range(n)]
    full = np.int64((1 << n) - 1)
    cap = np.int64(cfg.search_cap)

    slots = 0
    op_count = 0
    events: list[SlotEvent] = []
    pointer = 0
    skips = 0
    done = bool((know == full).all())

    while not done and slots < max_slots:
        if cfg.scheme is Scheme.C_DBS_NS:
            tx, chosen, beta, ops = ns_search(know, adj, cap)
            op_count += int(ops)
            tx = int(tx)
            if beta == 0:
                raise RuntimeError("node selection found no useful transmitter")
        else:
            tx = pointer
            pointer = (pointer + 1) % n
            nbrs_know = know[nbr_ids[tx]]
            chosen, beta, ops = dbs_search(
                know[tx], nbrs_know, cfg.scheme is Scheme.U_DBS, cap
            )
            op_count += int(ops)
            if beta == 0:
                skips += 1
                if skips > n:
                    raise RuntimeError("full silent cycle on unsynchronized state")
                continue
            skips = 0

        nbrs = nbr_ids[tx]
        draws = rng.random(len(nbrs))
        codes = np.empty(len(nbrs), dtype=np.int8)
        blocks = np.empty(len(nbrs), dtype=np.int64)
        ops, ok = broadcast_and_apply(
            np.int64(chosen), know, matrix, nbrs, draws, cfg.pe, codes, blocks
        )
        if not ok:
            raise CodecCorruptionError(f"decode mismatch at slot {slots + 1}, tx {tx}")
        op_count += int(ops)
        slots += 1

        if cfg.record_events:
            outcomes = []
            for i, j in enumerate(nbrs):
                kind = _CODES[codes[i]]
                outcomes.append(
                    ReceiverOutcome(
                        rx=int(j),
                        kind=kind,
                        block=int(blocks[i]) if kind == "decoded" else None,
                        unknown_count=int(blocks[i]) if kind == "undecodable" else None,
                    )
                )
            comps = tuple(i for i in range(n) if int(chosen) >> i & 1)
            events.append(SlotEvent(slots, tx, comps, tuple(outcomes)))

        done = bool((know == full).all())

    final = [
        KnowledgeSet(i, {b for b in range(n) if int(know[i]) >> b & 1}) for i in range(n)
    ]
    return SimResult(slots, done, events, op_count, final)
