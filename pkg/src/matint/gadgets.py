"""Instance types, reductions from Empty Set to matroid intersection, and encoders.

ES instances are over the universe [n] = {1..n}; element m lives at bit m-1.
The grid bijection maps ES element m to grid index m-1, so an ES bitmask and
the bitmask of its image on the grid are the same integer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .bits import from_indices, popcount, to_indices
from .core import GuardError, Oracle, rank, restrict
from .zoo import (SetFamilyOracle, SUMatrix, g_matroid, grid_lines, grid_partition_matroid,
                  grid_points, partition_matroid, point_index, graphic_matroid, truncate,
                  uniform_matroid)

SU_GUARD = 36


# ---- instance types --------------------------------------------------------

class ESInstance:
    """Empty Set instance: is the family F of k-subsets of [n] non-empty?

    `F` is a counting oracle; sets of the wrong size are answered False but
    still cost a query.
    """

    def __init__(self, n: int, k: int, member: Callable[[int], bool], name: str = "F"):
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        self.n = n
        self.k = k
        self.F = Oracle(n, lambda S: popcount(S) == k and bool(member(S)), name=name)

    @classmethod
    def from_family(cls, n: int, k: int, family: Iterable[Iterable[int]]):
        """Build from explicit sets of 1-based elements."""
        masks = set()
        for s in family:
            m = from_indices(e - 1 for e in s)
            if popcount(m) != k or m >> n:
                raise ValueError(f"set {sorted(s)} is not a {k}-subset of [{n}]")
            masks.add(m)
        fam = frozenset(masks)
        return cls(n, k, lambda S: S in fam)

    def __repr__(self):
        return f"ESInstance(n={self.n}, k={self.k})"


@dataclass
class LMIInstance:
    n: int
    matroids: list[Oracle]
    G: Oracle | None = None
    L: SUMatrix | None = None
    note: str = ""

    def __post_init__(self):
        if len(self.matroids) < 2:
            raise ValueError("need at least two matroids")
        if any(m.n != self.n for m in self.matroids):
            raise ValueError("matroids must share the ground set")

    @property
    def ell(self) -> int:
        return len(self.matroids)


@dataclass
class EMIInstance:
    n: int
    red: int
    m1: Oracle
    m2: Oracle
    k: int
    elements: tuple[int, ...] | None = None  # local index -> grid index, when derived from a grid

    def __post_init__(self):
        if self.red >> self.n:
            raise ValueError("red set outside the ground set")
        if self.m1.n != self.n or self.m2.n != self.n:
            raise ValueError("matroids must share the ground set")
        if not 0 <= self.k <= self.n:
            raise ValueError("need 0 <= k <= n")


@dataclass
class CNFInstance:
    n: int
    clauses: list[tuple[int, ...]]

    def __post_init__(self):
        self.clauses = [tuple(c) for c in self.clauses]
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause")
            if any(lit == 0 or abs(lit) > self.n for lit in c):
                raise ValueError(f"literal out of range in clause {c}")

    def satisfied_by(self, true_vars: int) -> bool:
        """`true_vars` is a bitmask with bit v-1 set when variable v is true."""
        for c in self.clauses:
            if not any((true_vars >> (abs(l) - 1) & 1) == (l > 0) for l in c):
                return False
        return True


@dataclass
class Digraph:
    n: int
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.edges = [tuple(e) for e in self.edges]
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate arcs")
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loop")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"arc ({u},{v}) out of range")


@dataclass
class ThreeDMInstance:
    m: int
    triplets: list[tuple[int, int, int]]

    def __post_init__(self):
        self.triplets = [tuple(t) for t in self.triplets]
        if len(set(self.triplets)) != len(self.triplets):
            raise ValueError("duplicate triplets")
        for t in self.triplets:
            if len(t) != 3 or any(not 1 <= x <= self.m for x in t):
                raise ValueError(f"triplet {t} out of range")


# ---- grid bijection and SU matrices ---------------------------------------

class GridBijection:
    """m in [N^d] <-> grid point, lexicographic with coordinate 1 most significant."""

    def __init__(self, N: int, d: int):
        if N < 2 or d < 2:
            raise ValueError("need N >= 2 and d >= 2")
        self.N, self.d = N, d
        self._points = grid_points(N, d)

    def __call__(self, m: int) -> tuple[int, ...]:
        return self._points[m - 1]

    def inverse(self, p: Sequence[int]) -> int:
        return point_index(p, self.N) + 1

    def __len__(self):
        return len(self._points)

    def image(self) -> list[tuple[int, ...]]:
        return list(self._points)


def canonical_bijection(N: int, d: int) -> GridBijection:
    return GridBijection(N, d)


def enumerate_su_matrices(N: int, d: int, relaxed: bool = False) -> Iterator[SUMatrix]:
    """Every SU matrix exactly once, lexicographic in the column-major entry tuple.

    With `relaxed`, entries may go up to N^(d-1) instead of N; see SUMatrix.
    """
    if N < 2 or d < 2:
        raise ValueError("need N >= 2 and d >= 2")
    if N ** d > SU_GUARD:
        raise GuardError(f"SU enumeration limited to N^d <= {SU_GUARD}")
    cap = N ** (d - 1) if relaxed else N
    vectors = list(itertools.product(range(cap + 1), repeat=N))
    by_sum: dict[int, list[tuple[int, ...]]] = {}
    for v in vectors:
        by_sum.setdefault(sum(v), []).append(v)
    for first in vectors:
        K = sum(first)
        if not 2 <= K <= N ** d - 1:
            continue
        for rest in itertools.product(by_sum[K], repeat=d - 1):
            yield SUMatrix.from_columns(N, d, (first,) + rest, relaxed=relaxed)


def su_matrix_for_set(S: int, N: int, d: int) -> SUMatrix:
    """Coordinate-count matrix of a grid subset; S is perfect for it.

    The result is relaxed only when some count exceeds N (possible for d >= 3).
    """
    size = popcount(S)
    if not 2 <= size <= N ** d - 1:
        raise ValueError(f"need 2 <= |S| <= {N ** d - 1}, got {size}")
    lines = grid_lines(N, d)
    cols = [tuple(popcount(S & lines[j][i]) for i in range(N)) for j in range(d)]
    relaxed = any(x > N for c in cols for x in c)
    return SUMatrix.from_columns(N, d, cols, relaxed=relaxed)


def grid_side(n: int, d: int) -> int:
    N = round(n ** (1.0 / d))
    for cand in (N - 1, N, N + 1):
        if cand >= 2 and cand ** d == n:
            return cand
    raise ValueError(f"{n} is not a perfect {d}-th power of some N >= 2")


# ---- reductions ------------------------------------------------------------

def reduce_es_to_lmi(es: ESInstance, L: SUMatrix, ell: int) -> LMIInstance:
    """G-matroid of (L, image of F) followed by the d grid partition matroids."""
    if ell < 3:
        raise ValueError("need ell >= 3")
    d = ell - 1
    if L.d != d:
        raise ValueError(f"L has {L.d} columns, expected {d}")
    if es.n != L.N ** d:
        raise ValueError(f"ES universe {es.n} does not match grid size {L.N ** d}")
    G = SetFamilyOracle(L.N, d, es.F, name="G")
    mats = [g_matroid(L, G)] + [grid_partition_matroid(L, j) for j in range(1, d + 1)]
    return LMIInstance(es.n, mats, G=G, L=L)


def emi_matrix(n: int, k: int) -> SUMatrix:
    col2 = [0] * n
    col2[0], col2[1] = k, n - k
    return SUMatrix.from_columns(n, 2, ((1,) * n, tuple(col2)))


def x_set(S: int, n: int) -> int:
    """Grid mask of {(s,1) : s in S} + {(s,2) : s not in S} on the n x n grid."""
    T = 0
    for s in range(n):
        T |= 1 << (s * n + (0 if S >> s & 1 else 1))
    return T


def reduce_es_to_emi(es: ESInstance) -> EMIInstance:
    """Two-column gadget: red elements are column 1, matroids are restricted to columns 1-2.

    Local element 2(s-1) is grid point (s,1) and 2(s-1)+1 is (s,2).
    """
    n, k = es.n, es.k
    if n < 3:
        raise ValueError("reduction needs n >= 3")
    L = emi_matrix(n, k)

    def g_member(T):
        S = 0
        for s in range(n):
            if T >> (s * n) & 1:
                S |= 1 << s
        if T != x_set(S, n):
            return False
        return es.F(S)

    G = SetFamilyOracle(n, 2, g_member, name="G")
    E = 0
    for s in range(n):
        E |= 0b11 << (s * n)
    m1 = restrict(grid_partition_matroid(L, 1), E)
    m2 = restrict(g_matroid(L, G), E)
    m1.name, m2.name = "P1|E", "M_G|E"
    red = from_indices(range(0, 2 * n, 2))
    return EMIInstance(2 * n, red, m1, m2, k, elements=m1.elements)


def emi_local_x(S: int, n: int) -> int:
    """X(S) in the local indexing of reduce_es_to_emi's ground set."""
    T = 0
    for s in range(n):
        T |= 1 << (2 * s + (0 if S >> s & 1 else 1))
    return T


def es_from_sat(cnf: CNFInstance, k: int) -> ESInstance:
    if not 0 <= k <= cnf.n:
        raise ValueError("need 0 <= k <= n")
    return ESInstance(cnf.n, k, cnf.satisfied_by, name="F_sat")


# ---- encoders --------------------------------------------------------------

def _rank_checked(n: int, mats: list[Oracle], target: int, what: str) -> LMIInstance:
    """Keep the encoding only if every matroid has rank `target`.

    A rank deficit rules out a solution, but smaller common bases may still
    exist, so the instance is swapped for one with no common basis at all.
    """
    if all(rank(m) == target for m in mats):
        return LMIInstance(n, mats)
    g = max(n, 1)
    blocked = [uniform_matroid(g, 0)] + [uniform_matroid(g, 1) for _ in mats[1:]]
    return LMIInstance(g, blocked, note=f"rank deficit: no {what}")


def encode_3dm(inst: ThreeDMInstance) -> LMIInstance:
    """Three coordinate partition matroids (bound 1 per value) truncated to m."""
    if inst.m < 1 or not inst.triplets:
        raise ValueError("need m >= 1 and a non-empty triplet list")
    n = len(inst.triplets)
    mats = []
    for c in range(3):
        blocks = [[i for i, t in enumerate(inst.triplets) if t[c] == a] for a in range(1, inst.m + 1)]
        mats.append(truncate(partition_matroid(n, blocks, [1] * inst.m, name=f"X{c + 1}"), inst.m))
    return _rank_checked(n, mats, inst.m, "perfect matching")


def encode_hampath(g: Digraph) -> LMIInstance:
    """Out-degree and in-degree partitions truncated to |V|-1, plus the graphic matroid."""
    if g.n < 2:
        raise ValueError("need at least two vertices")
    n = len(g.edges)
    out_blocks = [[i for i, (u, _) in enumerate(g.edges) if u == v] for v in range(1, g.n + 1)]
    in_blocks = [[i for i, (_, w) in enumerate(g.edges) if w == v] for v in range(1, g.n + 1)]
    mats = [
        truncate(partition_matroid(n, out_blocks, [1] * g.n, name="out"), g.n - 1),
        truncate(partition_matroid(n, in_blocks, [1] * g.n, name="in"), g.n - 1),
        graphic_matroid(g.edges, name="graphic"),
    ]
    return _rank_checked(n, mats, g.n - 1, "Hamiltonian path")


def has_perfect_3dm(inst: ThreeDMInstance) -> bool:
    for combo in itertools.combinations(inst.triplets, inst.m):
        if all(len({t[c] for t in combo}) == inst.m for c in range(3)):
            return True
    return False


def has_hamiltonian_path(g: Digraph) -> bool:
    arcs = set(g.edges)
    for perm in itertools.permutations(range(1, g.n + 1)):
        if all((perm[i], perm[i + 1]) in arcs for i in range(g.n - 1)):
            return True
    return False


def all_digraphs(n: int) -> Iterator[Digraph]:
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    for mask in range(1 << len(pairs)):
        yield Digraph(n, [pairs[i] for i in to_indices(mask)])
