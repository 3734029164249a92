"""Bitmask helpers. A subset of {0..n-1} is an int whose bit i marks element i."""

from __future__ import annotations

from typing import Iterable, Iterator


def popcount(mask: int) -> int:
    return mask.bit_count()


def full(n: int) -> int:
    return (1 << n) - 1


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def to_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def k_subsets(n: int, k: int) -> Iterator[int]:
    """All k-subsets of {0..n-1} in increasing bitmask order (Gosper's hack)."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    s = (1 << k) - 1
    limit = 1 << n
    while s < limit:
        yield s
        c = s & -s
        r = s + c
        s = (((r ^ s) >> 2) // c) | r


def subsets_of(mask: int, k: int) -> Iterator[int]:
    """k-subsets of `mask`, in increasing bitmask order."""
    elems = to_indices(mask)
    for sub in k_subsets(len(elems), k):
        yield expand(sub, elems)


def expand(mask: int, elements: list[int] | tuple[int, ...]) -> int:
    """Map a mask over positions 0..len(elements)-1 to the parent mask."""
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << elements[i]
        mask >>= 1
        i += 1
    return out


def compress(mask: int, elements: list[int] | tuple[int, ...]) -> int:
    """Inverse of expand on masks contained in the image of `elements`."""
    out = 0
    for pos, e in enumerate(elements):
        if mask >> e & 1:
            out |= 1 << pos
    return out
