"""Data block selection (DBS) and node selection (NS).

DBS picks the subset of a transmitter's blocks whose XOR packet is decodable
and innovative for the most neighbors; NS picks the transmitter whose DBS
result helps the largest fraction of its neighborhood. Both are deterministic:
DBS ties go to the smaller subset then the lexicographically smallest id
sequence, NS ties to the larger helped count then the smaller node id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._kernels import dbs_search, ns_search
from .codec import KnowledgeSet
from .topology import Topology

DEFAULT_SEARCH_CAP = 20  # exhaustive subset search up to this pool size


@dataclass(frozen=True)
class DbsResult:
    chosen: frozenset[int]
    beta: int
    helped: frozenset[int]


@dataclass(frozen=True)
class NsResult:
    chosen_node: int
    score: Fraction
    per_node: dict[int, tuple[DbsResult, Fraction]]


def _mask(blocks) -> int:
    m = 0
    for b in blocks:
        m |= 1 << b
    return m


def _unmask(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def knowledge_masks(knowledge: Sequence[KnowledgeSet]) -> np.ndarray:
    return np.array([_mask(k.held) for k in knowledge], dtype=np.int64)


def candidate_pool(n: int, knowledge: Sequence[KnowledgeSet], t: Topology) -> set[int]:
    """Blocks node n holds that at least one neighbor lacks."""
    held = knowledge[n].held
    pool: set[int] = set()
    for j in t.neighbors(n):
        pool |= held - knowledge[j].held
    return pool


def _dbs(n, knowledge, t, singles_only, search_cap) -> DbsResult:
    nbrs = t.neighbors(n)
    know = knowledge_masks(knowledge)
    nbr_know = know[np.array(nbrs, dtype=np.intp)] if nbrs else np.empty(0, np.int64)
    mask, beta, _ops = dbs_search(
        np.int64(know[n]), nbr_know, singles_only, np.int64(search_cap)
    )
    chosen = _unmask(int(mask))
    helped = frozenset(j for j in nbrs if len(chosen - knowledge[j].held) == 1)
    assert len(helped) == beta
    return DbsResult(chosen, int(beta), helped)


def dbs(
    n: int,
    knowledge: Sequence[KnowledgeSet],
    t: Topology,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> DbsResult:
    """Exhaustive (up to search_cap, then greedy) selection over the pool."""
    return _dbs(n, knowledge, t, False, search_cap)


def dbs_single(
    n: int,
    knowledge: Sequence[KnowledgeSet],
    t: Topology,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> DbsResult:
    """DBS restricted to single-block (uncoded) packets."""
    return _dbs(n, knowledge, t, True, search_cap)


def ns(
    knowledge: Sequence[KnowledgeSet],
    t: Topology,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> NsResult:
    """Evaluate DBS for every node and return the best helped-fraction node."""
    per_node: dict[int, tuple[DbsResult, Fraction]] = {}
    best = None
    for i in range(t.n):
        res = _dbs(i, knowledge, t, False, search_cap)
        m = t.degree(i)
        score = Fraction(res.beta, m) if m else Fraction(0)
        per_node[i] = (res, score)
        if best is None:
            best = i
        else:
            b_res, b_score = per_node[best]
            if score > b_score or (score == b_score and res.beta > b_res.beta):
                best = i
    assert best is not None
    return NsResult(best, per_node[best][1], per_node)


def ns_fast(know: np.ndarray, adj: np.ndarray, search_cap: int = DEFAULT_SEARCH_CAP):
    """Kernel-backed NS over mask arrays: (node, chosen_mask, beta, ops)."""
    return ns_search(know, adj, np.int64(search_cap))
