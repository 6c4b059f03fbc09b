"""Hot numeric kernels for block selection and broadcast application.

All knowledge/adjacency sets are int64 bitmasks (bit i = block/node i), so the
library supports up to 63 nodes. The same source is either compiled with numba
or run as plain Python: set ``NCSYNC_NO_NUMBA=1`` to force the interpreted
fallback (used by the parity tests and the kernel benchmark).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("NCSYNC_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

if not _DISABLE:
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        USING_NUMBA = False
else:
    USING_NUMBA = False

if not USING_NUMBA:

    def njit(*args, **kwargs):  # type: ignore[misc]
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


MAX_NODES = 63  # int64 bitmask width minus the sign bit


@njit(cache=True)
def popcount(x):
    # SWAR popcount; x is a non-negative int64 (bit 63 never used).
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    x = x + (x >> 8)
    x = x + (x >> 16)
    x = x + (x >> 32)
    return x & 0x7F


@njit(cache=True)
def bit_index(b):
    # Index of the single set bit in b.
    return popcount(b - 1)


@njit(cache=True)
def lex_less(a, b):
    """True if the sorted id sequence of mask a is lexicographically < that of b."""
    while a != 0 and b != 0:
        la = a & (-a)
        lb = b & (-b)
        if la != lb:
            return la < lb
        a ^= la
        b ^= lb
    return a == 0 and b != 0


@njit(cache=True)
def dbs_search(held, nbr_know, singles_only, cap):
    """Pick the block subset of `held` maximizing the helped-neighbor count.

    nbr_know holds the knowledge masks of the transmitter's neighbors. A
    neighbor is helped when exactly one chosen block is unknown to it. Ties go
    to the smaller subset, then the lexicographically smallest id sequence.

    Returns (chosen_mask, beta, ops) where ops follows the operation-count
    proxy: one unit per membership test building the candidate pool, plus
    |subset| * m per subset evaluated.
    """
    m = nbr_know.shape[0]
    ops = m * popcount(held)
    pool = 0
    for j in range(m):
        pool |= held & ~nbr_know[j]
    k = popcount(pool)
    if k == 0:
        return 0, 0, ops

    best_mask = 0
    best_beta = 0
    best_pc = 0

    if singles_only:
        rest = pool
        while rest != 0:
            s = rest & (-rest)
            beta = 0
            for j in range(m):
                if popcount(s & ~nbr_know[j]) == 1:
                    beta += 1
            ops += m
            # ascending bit order + strict compare = lex-smallest tie-break
            if beta > best_beta:
                best_beta = beta
                best_mask = s
            rest ^= s
        return best_mask, best_beta, ops

    if k <= cap:
        sub = pool
        while sub != 0:
            pc = popcount(sub)
            beta = 0
            for j in range(m):
                if popcount(sub & ~nbr_know[j]) == 1:
                    beta += 1
            ops += pc * m
            if beta > best_beta or (
                beta == best_beta
                and beta > 0
                and (pc < best_pc or (pc == best_pc and lex_less(sub, best_mask)))
            ):
                best_beta = beta
                best_mask = sub
                best_pc = pc
            sub = (sub - 1) & pool
        return best_mask, best_beta, ops

    # Greedy fallback above the exhaustive cap: grow by the block with the
    # largest marginal gain (smallest id on ties), stop when nothing improves.
    chosen = 0
    cur_beta = 0
    while True:
        add = 0
        add_beta = cur_beta
        rest = pool & ~chosen
        while rest != 0:
            b = rest & (-rest)
            cand = chosen | b
            beta = 0
            for j in range(m):
                if popcount(cand & ~nbr_know[j]) == 1:
                    beta += 1
            ops += popcount(cand) * m
            if beta > add_beta:
                add_beta = beta
                add = b
            rest ^= b
        if add == 0:
            break
        chosen |= add
        cur_beta = add_beta
    return chosen, cur_beta, ops


@njit(cache=True)
def ns_search(know, adj, cap):
    """Transmitter selection: argmax over nodes of beta_i / m_i.

    Ties go to the larger beta, then the smaller node id. Returns
    (node, chosen_mask, beta, total_ops); total_ops sums the dbs_search cost
    over every node, since node selection evaluates them all.
    """
    n = know.shape[0]
    scratch = np.empty(n, dtype=np.int64)
    total_ops = 0
    best_node = 0
    best_mask = 0
    best_beta = 0
    best_m = 1
    for i in range(n):
        m = 0
        rest = adj[i]
        while rest != 0:
            b = rest & (-rest)
            scratch[m] = know[bit_index(b)]
            m += 1
            rest ^= b
        if m == 0:
            continue
        mask, beta, ops = dbs_search(know[i], scratch[:m], False, cap)
        total_ops += ops
        if i == 0:
            best_node = 0
            best_mask = mask
            best_beta = beta
            best_m = m
        elif beta * best_m > best_beta * m or (
            beta * best_m == best_beta * m and beta > best_beta
        ):
            best_node = i
            best_mask = mask
            best_beta = beta
            best_m = m
    return best_node, best_mask, best_beta, total_ops


@njit(cache=True)
def broadcast_and_apply(comps_mask, know, store, nbrs, draws, pe, out_codes, out_blocks):
    """Encode the chosen blocks, deliver to neighbors, update knowledge masks.

    Per-receiver outcome codes: 0 = lost, 1 = already known, 2 = decoded
    (out_blocks gets the block id), 3 = undecodable (out_blocks gets the
    unknown count). Mutates `know` in place. Returns (ops, ok) where ok is
    False if any decoded payload failed the byte-equality check against the
    original block (codec corruption; callers treat it as fatal).
    """
    L = store.shape[1]
    c = popcount(comps_mask)
    pkt = np.zeros(L, dtype=np.uint8)
    rest = comps_mask
    while rest != 0:
        b = rest & (-rest)
        i = bit_index(b)
        for t in range(L):
            pkt[t] ^= store[i, t]
        rest ^= b
    ops = (c - 1) * L  # byte XORs folding c payloads
    ok = True
    for idx in range(nbrs.shape[0]):
        j = nbrs[idx]
        if draws[idx] < pe:
            out_codes[idx] = 0
            out_blocks[idx] = -1
            continue
        ops += c  # membership tests classifying the packet
        unknown = comps_mask & ~know[j]
        u = popcount(unknown)
        if u == 0:
            out_codes[idx] = 1
            out_blocks[idx] = -1
        elif u == 1:
            missing = bit_index(unknown)
            dec = pkt.copy()
            nk = 0
            rest = comps_mask ^ unknown
            while rest != 0:
                b = rest & (-rest)
                i = bit_index(b)
                for t in range(L):
                    dec[t] ^= store[i, t]
                nk += 1
                rest ^= b
            ops += nk * L
            for t in range(L):
                if dec[t] != store[missing, t]:
                    ok = False
            know[j] |= unknown
            out_codes[idx] = 2
            out_blocks[idx] = missing
        else:
            out_codes[idx] = 3
            out_blocks[idx] = u
    return ops, ok
