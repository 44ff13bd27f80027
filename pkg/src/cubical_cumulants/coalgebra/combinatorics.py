"""Koszul signs, subset signs, set partitions and surjection counts."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterator, Sequence


def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of reordering graded symbols.

    ``permutation[p]`` is the original index of the symbol placed at
    position ``p``; ``degrees[i]`` is the degree of original symbol ``i``.
    Each pair ``i > j`` with ``i`` placed before ``j`` contributes
    ``(-1)**(degrees[i]*degrees[j])``.
    """
    if len(permutation) != len(degrees):
        raise ValueError("permutation and degrees differ in length")
    parity = 0
    k = len(permutation)
    for p in range(k):
        i = permutation[p]
        if degrees[i] & 1:
            for q in range(p + 1, k):
                j = permutation[q]
                if j < i and degrees[j] & 1:
                    parity ^= 1
    return -1 if parity else 1


def subset_sign(subset: Sequence[int] | frozenset[int], degrees: Sequence[int]) -> int:
    """The shuffle sign of splitting ``v_1..v_k`` into ``v_I`` then ``v_{I^c}``.

    Indices are 0-based positions into ``degrees``.
    """
    inside = set(subset)
    if not inside <= set(range(len(degrees))):
        raise ValueError("subset is not contained in the index range")
    parity = 0
    for i in inside:
        if degrees[i] & 1:
            for j in range(i):
                if j not in inside and degrees[j] & 1:
                    parity ^= 1
    return -1 if parity else 1


def reorder_sign(blocks: Sequence[Sequence[int]], degrees: Sequence[int]) -> int:
    """Koszul sign of listing positions block by block."""
    perm = [i for block in blocks for i in block]
    return koszul_sign(perm, degrees)


def proper_subsets(k: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ``(I, I^c)`` with ``I`` proper and non-empty, both ascending."""
    full = range(k)
    for r in range(1, k):
        for subset in combinations(full, r):
            s = set(subset)
            yield subset, tuple(i for i in full if i not in s)


def set_partitions(items: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """Unordered set partitions with ascending blocks (block order unspecified)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [(first,)] + part
        for i, block in enumerate(part):
            yield part[:i] + [(first,) + block] + part[i + 1:]


def canonical_set_partitions(k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Cached unordered partitions of ``range(k)``, blocks sorted by least element."""
    return _cached_partitions(k)


@lru_cache(maxsize=None)
def _cached_partitions(k: int) -> tuple:
    return tuple(
        tuple(sorted(p, key=lambda b: b[0])) for p in set_partitions(range(k))
    )


def ordered_set_partitions(k: int, r: int) -> Iterator[list[tuple[int, ...]]]:
    """Ordered partitions of ``range(k)`` into ``r`` non-empty blocks.

    These correspond to surjections ``[k] -> [r]``; there are ``N_{k,r}``.
    """
    for part in _cached_partitions(k):
        if len(part) != r:
            continue
        yield from _orderings(list(part))


def _orderings(blocks):
    if len(blocks) <= 1:
        yield list(blocks)
        return
    for i in range(len(blocks)):
        for tail in _orderings(blocks[:i] + blocks[i + 1:]):
            yield [blocks[i]] + tail


def surjection_count(s: int, t: int) -> int:
    """Number of onto maps ``[s] -> [t]`` by inclusion-exclusion."""
    if s < 0 or t < 0:
        raise ValueError("sizes must be non-negative")
    return sum((-1) ** (t - j) * comb(t, j) * j**s for j in range(0, t + 1))


def cumulant_weight(k: int) -> int:
    """``(-1)**(k-1) * (k-1)!``, the block weight of the inverse cumulant map."""
    return (-1) ** (k - 1) * factorial(k - 1)
