"""Lexicographic ranking of k-subsets of {0, ..., m-1}.

The canonical simplex order used everywhere in the package is
dimension-major and lexicographic within a dimension; these helpers
translate between a simplex and its position in that order.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

import numpy as np

# combination tables above this many rows are not materialised
TABLE_LIMIT = 5_000_000


def rank_combination(vertices: tuple[int, ...], m: int) -> int:
    """Lexicographic rank of a sorted k-subset of range(m)."""
    k = len(vertices)
    rank = 0
    prev = -1
    for pos, v in enumerate(vertices):
        left = k - pos - 1
        for c in range(prev + 1, v):
            rank += comb(m - c - 1, left)
        prev = v
    return rank


def unrank_combination(rank: int, m: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`rank_combination`."""
    if not 0 <= rank < comb(m, k):
        raise ValueError(f"rank {rank} out of range for C({m},{k})")
    out = []
    c = 0
    for pos in range(k):
        left = k - pos - 1
        while True:
            block = comb(m - c - 1, left)
            if rank < block:
                break
            rank -= block
            c += 1
        out.append(c)
        c += 1
    return tuple(out)


@lru_cache(maxsize=16)
def combination_table(m: int, k: int) -> np.ndarray:
    """All k-subsets of range(m) in lexicographic order, one per row."""
    total = comb(m, k)
    if total > TABLE_LIMIT:
        raise ValueError(f"C({m},{k}) = {total} exceeds table limit")
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), k)),
        dtype=np.int64,
        count=total * k,
    )
    table = flat.reshape(total, k)
    table.setflags(write=False)
    return table


def unrank_many(ranks, m: int, k: int) -> list[tuple[int, ...]]:
    """Unrank a batch of lexicographic ranks, using a cached table when small."""
    ranks = np.asarray(ranks, dtype=np.int64)
    if ranks.size == 0:
        return []
    if comb(m, k) <= TABLE_LIMIT:
        rows = combination_table(m, k)[ranks]
        return [tuple(row) for row in rows.tolist()]
    return [unrank_combination(int(x), m, k) for x in ranks]
