"""Random geometric network topologies with controlled connectivity.

Nodes live on the unit square; two nodes are linked when their Euclidean
distance is within the communication radius. Adjacency is stored as one int64
bitmask per node because the selection procedures do heavy set intersections.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from ._kernels import MAX_NODES

SQRT2 = math.sqrt(2.0)


class TopologyGenerationError(RuntimeError):
    """Raised when rejection sampling cannot find a connected sample."""


@dataclass(frozen=True)
class Topology:
    n: int
    adj_masks: np.ndarray  # int64[n], bit j set iff (i, j) is an edge
    positions: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        self.adj_masks.setflags(write=False)
        if self.positions is not None:
            self.positions.setflags(write=False)

    def neighbors(self, i: int) -> list[int]:
        mask = int(self.adj_masks[i])
        return [j for j in range(self.n) if mask >> j & 1]

    def degree(self, i: int) -> int:
        return int(self.adj_masks[i]).bit_count()

    @property
    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            mask = int(self.adj_masks[u])
            for v in range(u + 1, self.n):
                if mask >> v & 1:
                    out.append((u, v))
        return out

    @property
    def edge_count(self) -> int:
        return sum(self.degree(i) for i in range(self.n)) // 2

    def average_degree(self) -> Fraction:
        return Fraction(2 * self.edge_count, self.n)

    def is_connected(self) -> bool:
        seen = 1
        frontier = 1
        full = (1 << self.n) - 1
        while frontier:
            nxt = 0
            for i in range(self.n):
                if frontier >> i & 1:
                    nxt |= int(self.adj_masks[i])
            frontier = nxt & ~seen
            seen |= nxt
            if seen == full:
                return True
        return seen == full

    def to_json_dict(self) -> dict:
        d = {"n": self.n, "edges": [[u, v] for u, v in self.edges]}
        if self.positions is not None:
            d["positions"] = [[float(x), float(y)] for x, y in self.positions]
        return d

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f)
            f.write("\n")

    @classmethod
    def from_json_dict(cls, d: dict) -> "Topology":
        pos = d.get("positions")
        t = from_edges(int(d["n"]), [(int(u), int(v)) for u, v in d["edges"]])
        if pos is not None:
            t = Topology(t.n, t.adj_masks.copy(), np.asarray(pos, dtype=float))
        return t

    @classmethod
    def load(cls, path) -> "Topology":
        with open(path) as f:
            return cls.from_json_dict(json.load(f))


def _masks_from_adjacency(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    masks = np.zeros(n, dtype=np.int64)
    for u, v in pairs:
        masks[u] |= np.int64(1 << v)
        masks[v] |= np.int64(1 << u)
    return masks


def _check_n(n: int) -> None:
    if not (2 <= n <= MAX_NODES):
        raise ValueError(f"node count must be in [2, {MAX_NODES}], got {n}")


def from_positions(positions: np.ndarray, radius: float) -> Topology:
    """Disk-model topology: (u, v) is an edge iff their distance <= radius."""
    pos = np.asarray(positions, dtype=float)
    n = pos.shape[0]
    _check_n(n)
    if not (0.0 < radius <= SQRT2):
        raise ValueError(f"radius must be in (0, sqrt(2)], got {radius}")
    diff = pos[:, None, :] - pos[None, :, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    adj = dist2 <= radius * radius
    np.fill_diagonal(adj, False)
    weights = np.int64(1) << np.arange(n, dtype=np.int64)
    masks = (adj * weights[None, :]).sum(axis=1, dtype=np.int64)
    return Topology(n, masks, pos.copy())


def generate_geometric(n: int, radius: float, rng: np.random.Generator) -> Optional[Topology]:
    """One random geometric sample; None when the sample is disconnected.

    Positions are i.i.d. uniform on the unit square. Callers resample on
    rejection.
    """
    _check_n(n)
    t = from_positions(rng.random((n, 2)), radius)
    return t if t.is_connected() else None


def generate_connected(
    n: int, radius: float, rng: np.random.Generator, max_tries: int = 10_000
) -> Topology:
    """Rejection-sample until connected; error out after max_tries rejections."""
    for _ in range(max_tries):
        t = generate_geometric(n, radius, rng)
        if t is not None:
            return t
    raise TopologyGenerationError(
        f"no connected sample in {max_tries} tries (n={n}, radius={radius})"
    )


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Topology:
    """Explicit edge-list constructor; connectivity is reported, not enforced."""
    _check_n(n)
    seen = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        seen.add((min(u, v), max(u, v)))
    return Topology(n, _masks_from_adjacency(n, seen))


def complete_graph(n: int) -> Topology:
    return from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Topology:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int) -> Topology:
    return from_edges(n, [(0, i) for i in range(1, n)])
