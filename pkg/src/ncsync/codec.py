"""Block store, knowledge sets, and the XOR packet codec.

Packets carry real payload bytes plus the explicit set of component block ids,
so decodability is an executable contract: a receiver lacking exactly one
component recovers that block's original bytes by XOR-peeling the known ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

DEFAULT_PAYLOAD_LEN = 32


class BlockStore:
    """Immutable map from block id to a fixed-length payload."""

    def __init__(self, payloads: dict[int, bytes]):
        if not payloads:
            raise ValueError("store must hold at least one block")
        lengths = {len(p) for p in payloads.values()}
        if len(lengths) != 1:
            raise ValueError(f"payload lengths differ: {sorted(lengths)}")
        self._payloads = dict(payloads)
        self.length = lengths.pop()

    @classmethod
    def random(cls, n: int, length: int, rng: np.random.Generator) -> "BlockStore":
        return cls({i: rng.bytes(length) for i in range(n)})

    def __contains__(self, block: int) -> bool:
        return block in self._payloads

    def __len__(self) -> int:
        return len(self._payloads)

    def payload(self, block: int) -> bytes:
        try:
            return self._payloads[block]
        except KeyError:
            raise KeyError(f"unknown block id {block}") from None

    def matrix(self) -> np.ndarray:
        """Payloads as a uint8 matrix (row = block id), for the sim kernels."""
        n = max(self._payloads) + 1
        out = np.zeros((n, self.length), dtype=np.uint8)
        for i, p in self._payloads.items():
            out[i] = np.frombuffer(p, dtype=np.uint8)
        return out


@dataclass
class KnowledgeSet:
    """Blocks currently stored at one node; only ever grows."""

    owner: int
    held: set[int]

    def __post_init__(self):
        self.held = set(self.held)
        if self.owner not in self.held:
            raise ValueError(f"node {self.owner} must hold its own block")

    def add(self, block: int) -> None:
        self.held.add(block)

    def __contains__(self, block: int) -> bool:
        return block in self.held


@dataclass(frozen=True)
class Packet:
    components: frozenset[int]
    payload: bytes


@dataclass(frozen=True)
class AlreadyKnown:
    pass


@dataclass(frozen=True)
class Decodable:
    missing: int


@dataclass(frozen=True)
class Undecodable:
    unknown_count: int


Classification = Union[AlreadyKnown, Decodable, Undecodable]


def _xor_bytes(a: bytes, b: bytes) -> bytes:
    return (np.frombuffer(a, np.uint8) ^ np.frombuffer(b, np.uint8)).tobytes()


def encode(blocks: Iterable[int], store: BlockStore) -> Packet:
    """XOR-fold the payloads of `blocks`; a singleton gives the raw payload."""
    comps = frozenset(blocks)
    if not comps:
        raise ValueError("cannot encode an empty block set")
    payload = bytes(store.length)
    for b in sorted(comps):
        payload = _xor_bytes(payload, store.payload(b))
    return Packet(comps, payload)


def classify(packet: Packet, k: KnowledgeSet) -> Classification:
    unknown = packet.components - k.held
    if not unknown:
        return AlreadyKnown()
    if len(unknown) == 1:
        return Decodable(next(iter(unknown)))
    return Undecodable(len(unknown))


def decode(packet: Packet, k: KnowledgeSet, store: BlockStore) -> tuple[int, bytes]:
    """Peel the known components off the payload; caller inserts the result."""
    cls = classify(packet, k)
    if not isinstance(cls, Decodable):
        raise ValueError(f"packet is not decodable for node {k.owner}: {cls}")
    payload = packet.payload
    for b in packet.components:
        if b != cls.missing:
            payload = _xor_bytes(payload, store.payload(b))
    return cls.missing, payload
