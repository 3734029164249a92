"""Concrete matroids: uniform, partition, graphic, truncation, and the grid family.

Grid points are d-tuples with coordinates in 1..N. They are flattened to
indices 0..N^d-1 in lexicographic order with the first coordinate most
significant, so every grid matroid is an ordinary `Oracle`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .bits import from_indices, full, popcount, to_indices
from .core import Oracle


def uniform_matroid(n: int, k: int) -> Oracle:
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return Oracle(n, lambda S: popcount(S) <= k, name=f"U({n},{k})")


def partition_matroid(n: int, blocks: Sequence[Iterable[int]], bounds: Sequence[int],
                      name: str = "partition") -> Oracle:
    masks = [from_indices(b) for b in blocks]
    if len(masks) != len(bounds):
        raise ValueError("one bound per block")
    if any(b < 0 for b in bounds):
        raise ValueError("bounds must be non-negative")
    seen = 0
    for m in masks:
        if m & seen:
            raise ValueError("blocks overlap")
        seen |= m
    if seen != full(n):
        raise ValueError("blocks do not cover the ground set")
    pairs = list(zip(masks, bounds))
    return Oracle(n, lambda S: all(popcount(S & m) <= b for m, b in pairs), name=name)


def _acyclic(edges: Sequence[tuple[int, int]], S: int) -> bool:
    parent: dict[int, int] = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for i in to_indices(S):
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def graphic_matroid(edges: Sequence[tuple[int, int]], name: str = "graphic") -> Oracle:
    """Cycle matroid of an undirected (multi)graph; element i is edges[i].

    Parallel edges are distinct elements, so a pair of them forms a cycle.
    """
    edges = [tuple(e) for e in edges]
    return Oracle(len(edges), lambda S: _acyclic(edges, S), name=name)


def truncate(oracle: Oracle, k: int) -> Oracle:
    if k < 0:
        raise ValueError("k must be non-negative")
    return Oracle(oracle.n, lambda S: popcount(S) <= k and oracle(S),
                  name=f"{oracle.name}<={k}", elements=oracle.elements)


# ---- grid ----------------------------------------------------------------

def grid_points(N: int, d: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(1, N + 1), repeat=d))


def point_index(p: Sequence[int], N: int) -> int:
    idx = 0
    for c in p:
        idx = idx * N + (c - 1)
    return idx


def grid_mask(points: Iterable[Sequence[int]], N: int) -> int:
    return from_indices(point_index(p, N) for p in points)


def mask_points(mask: int, N: int, d: int) -> list[tuple[int, ...]]:
    pts = grid_points(N, d)
    return [pts[i] for i in to_indices(mask)]


@dataclass(frozen=True)
class SUMatrix:
    """Limit matrix: entries[i-1][j-1] is the quota for coordinate j taking value i."""

    N: int
    d: int
    entries: tuple[tuple[int, ...], ...]
    relaxed: bool = False

    @property
    def entry_cap(self) -> int:
        """Largest allowed entry: N, or N^(d-1) (a full hyperplane) when relaxed."""
        return self.N ** (self.d - 1) if self.relaxed else self.N

    def __post_init__(self):
        N, d = self.N, self.d
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in r) for r in self.entries))
        if N < 2 or d < 2:
            raise ValueError("need N >= 2 and d >= 2")
        if len(self.entries) != N or any(len(r) != d for r in self.entries):
            raise ValueError("entries must be N rows of d columns")
        cap = self.entry_cap
        if any(not 0 <= x <= cap for r in self.entries for x in r):
            raise ValueError(f"entries must lie in 0..{cap}")
        sums = {sum(r[j] for r in self.entries) for j in range(d)}
        if len(sums) != 1:
            raise ValueError("column sums differ")
        K = sums.pop()
        if not 2 <= K <= N ** d - 1:
            raise ValueError(f"column sum {K} outside [2, N^d - 1]")

    @classmethod
    def from_columns(cls, N: int, d: int, cols: Sequence[Sequence[int]], relaxed: bool = False):
        return cls(N, d, tuple(zip(*cols)), relaxed)

    def quota(self, i: int, j: int) -> int:
        return self.entries[i - 1][j - 1]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j - 1] for r in self.entries)

    @property
    def K(self) -> int:
        return sum(self.column(1))

    @cached_property
    def lines(self) -> tuple[tuple[int, ...], ...]:
        return grid_lines(self.N, self.d)


_LINES: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}


def grid_lines(N: int, d: int) -> tuple[tuple[int, ...], ...]:
    """lines[j-1][i-1] = mask of grid points whose j-th coordinate equals i."""
    key = (N, d)
    if key not in _LINES:
        pts = grid_points(N, d)
        _LINES[key] = tuple(
            tuple(from_indices(m for m, p in enumerate(pts) if p[j] == i) for i in range(1, N + 1))
            for j in range(d))
    return _LINES[key]


class SetFamilyOracle(Oracle):
    """Membership oracle for a family of grid subsets."""

    def __init__(self, N: int, d: int, member: Callable[[int], bool], name: str = "G"):
        super().__init__(N ** d, member, name=name)
        self.N = N
        self.d = d

    @classmethod
    def from_sets(cls, N: int, d: int, family: Iterable[int], name: str = "G"):
        fam = frozenset(family)
        return cls(N, d, lambda S: S in fam, name=name)


def grid_partition_matroid(L: SUMatrix, j: int) -> Oracle:
    if not isinstance(L, SUMatrix):
        raise TypeError("L must be an SUMatrix")
    if not 1 <= j <= L.d:
        raise ValueError("dimension index out of range")
    pairs = [(m, L.quota(i, j)) for i, m in enumerate(L.lines[j - 1], start=1)]
    return Oracle(L.N ** L.d, lambda S: all(popcount(S & m) <= q for m, q in pairs),
                  name=f"P{j}")


def is_L_perfect(S: int, L: SUMatrix) -> bool:
    for j in range(1, L.d + 1):
        for i, m in enumerate(L.lines[j - 1], start=1):
            if popcount(S & m) != L.quota(i, j):
                return False
    return True


def g_matroid(L: SUMatrix, G: SetFamilyOracle) -> Oracle:
    """Paving matroid of rank K whose L-perfect K-sets are bases only if in G.

    Size is checked before perfectness before G, so each membership call asks
    G at most once.
    """
    if not isinstance(L, SUMatrix):
        raise TypeError("L must be an SUMatrix")
    if (G.N, G.d) != (L.N, L.d):
        raise ValueError("G and L disagree on grid dimensions")
    K = L.K

    def member(S):
        c = popcount(S)
        if c < K:
            return True
        if c > K:
            return False
        if not is_L_perfect(S, L):
            return True
        return G(S)

    return Oracle(L.N ** L.d, member, name="M_G")


def small_zoo(seed: int = 0) -> list[tuple[str, Oracle]]:
    """A seeded mix of small matroids (n <= 10) for property checks."""
    rng = random.Random(seed)
    zoo: list[tuple[str, Oracle]] = []
    for n in (1, 3, 5, 8):
        for k in sorted({0, n // 2, n}):
            zoo.append((f"uniform {n},{k}", uniform_matroid(n, k)))
    for i in range(6):
        n = rng.randint(1, 10)
        labels = [rng.randrange(3) for _ in range(n)]
        blocks = [[i for i in range(n) if labels[i] == b] for b in range(3)]
        bounds = [rng.randint(0, len(b)) for b in blocks]
        zoo.append((f"partition #{i} n={n}", partition_matroid(n, blocks, bounds)))
    for i in range(6):
        v = rng.randint(2, 6)
        m = rng.randint(1, 10)
        edges = [tuple(rng.sample(range(v), 2)) for _ in range(m)]
        g = graphic_matroid(edges)
        zoo.append((f"graphic #{i} v={v} m={m}", g))
        zoo.append((f"truncated graphic #{i} v={v} m={m}", truncate(graphic_matroid(edges), max(0, v - 2))))
    ones = SUMatrix(2, 2, ((1, 1), (1, 1)))
    zoo.append(("G-matroid 2x2 empty G", g_matroid(ones, SetFamilyOracle.from_sets(2, 2, []))))
    diag = grid_mask([(1, 1), (2, 2)], 2)
    zoo.append(("G-matroid 2x2 diagonal", g_matroid(ones, SetFamilyOracle.from_sets(2, 2, [diag]))))
    L3 = SUMatrix(3, 2, ((1, 2), (2, 0), (0, 1)))
    fam = [S for S in range(1 << 9) if popcount(S) == 3 and rng.random() < 0.5]
    zoo.append(("G-matroid 3x3", g_matroid(L3, SetFamilyOracle.from_sets(3, 2, fam))))
    return zoo
