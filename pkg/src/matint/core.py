"""Oracle-presented matroids.

Every matroid in the package is a membership predicate over bitmask subsets of
{0..n-1} wrapped in an `Oracle`, which counts how often it is asked.

Oracles are thread-confined: the counter is a plain int with no locking, so an
oracle must only be queried from the thread that owns it. Independent runs
should build independent oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .bits import compress, expand, full, k_subsets, popcount, to_indices

AXIOM_GUARD = 16
AUDIT_GUARD = 24


class GuardError(ValueError):
    """Input exceeds a desk-scale size guard."""


class Oracle:
    """Membership oracle with a query counter.

    `elements`, when set, maps local index i to the index of the same element
    in the parent ground set this oracle was derived from.
    """

    def __init__(self, n: int, member: Callable[[int], bool], name: str = "oracle",
                 elements: Sequence[int] | None = None):
        if n < 0:
            raise ValueError("ground set size must be non-negative")
        self.n = n
        self.name = name
        self.queries = 0
        self.elements = tuple(elements) if elements is not None else None
        self._member = member

    def __call__(self, S: int) -> bool:
        self.queries += 1
        return bool(self._member(S))

    @property
    def ground(self) -> int:
        return full(self.n)

    def __repr__(self):
        return f"Oracle({self.name!r}, n={self.n}, queries={self.queries})"


@dataclass
class QueryReport:
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def of(cls, oracles: Iterable[Oracle], baseline: dict[int, int] | None = None):
        """Snapshot counters. With `baseline` (id -> count) only the delta is kept."""
        counts: dict[str, int] = {}
        for o in oracles:
            key = o.name
            i = 2
            while key in counts:
                key = f"{o.name}#{i}"
                i += 1
            start = baseline.get(id(o), 0) if baseline else 0
            counts[key] = o.queries - start
        return cls(counts)


def greedy_basis(oracle: Oracle, order: Iterable[int] | None = None) -> int:
    B = 0
    for e in (range(oracle.n) if order is None else order):
        if oracle(B | (1 << e)):
            B |= 1 << e
    return B


def rank(oracle: Oracle) -> int:
    """Size of the greedy basis grown in ascending index order."""
    return popcount(greedy_basis(oracle))


def is_basis(oracle: Oracle, S: int) -> bool:
    if not oracle(S):
        return False
    for e in range(oracle.n):
        if not S >> e & 1 and oracle(S | (1 << e)):
            return False
    return True


def restrict(oracle: Oracle, S: int) -> Oracle:
    """Matroid on the elements of S, re-indexed in ascending order."""
    elems = tuple(to_indices(S))
    if elems and elems[-1] >= oracle.n:
        raise ValueError("S is not a subset of the ground set")
    return Oracle(len(elems), lambda T: oracle(expand(T, elems)),
                  name=f"{oracle.name}|R", elements=elems)


def contract(oracle: Oracle, X: int) -> Oracle:
    """Matroid on E - X whose independent sets T satisfy T + X independent.

    Independence of X is checked up front, costing one query.
    """
    if X >> oracle.n:
        raise ValueError("X is not a subset of the ground set")
    if not oracle(X):
        raise ValueError("X not independent")
    rest = tuple(to_indices(oracle.ground & ~X))
    return Oracle(len(rest), lambda T: oracle(expand(T, rest) | X),
                  name=f"{oracle.name}/C", elements=rest)


def lift(mask: int, oracle: Oracle) -> int:
    """Map a local mask of a derived oracle back to its parent's indices."""
    return mask if oracle.elements is None else expand(mask, oracle.elements)


def lower(mask: int, oracle: Oracle) -> int:
    return mask if oracle.elements is None else compress(mask, oracle.elements)


@dataclass
class AxiomVerdict:
    ok: bool
    violation: str | None = None
    A: int | None = None
    B: int | None = None

    def __bool__(self):
        return self.ok


def _independence_table(oracle: Oracle) -> np.ndarray:
    return np.fromiter((oracle(S) for S in range(1 << oracle.n)), dtype=bool,
                       count=1 << oracle.n)


def verify_matroid_axioms(oracle: Oracle) -> AxiomVerdict:
    """Exhaustively check the three matroid axioms.

    Queries every subset once. The exchange check works per independent B:
    with ext(B) the elements that extend B, a violating A exists iff some
    independent A inside E - ext(B) is larger than B.
    """
    n = oracle.n
    if n > AXIOM_GUARD:
        raise GuardError(f"axiom check limited to n <= {AXIOM_GUARD}, got {n}")
    ind = _independence_table(oracle)
    if not ind[0]:
        return AxiomVerdict(False, "empty set dependent", 0, None)
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        has = (idx & bit) != 0
        bad = has & ind & ~ind[idx ^ bit]
        if bad.any():
            S = int(np.flatnonzero(bad)[0])
            return AxiomVerdict(False, "hereditary", S, S ^ bit)

    pop = np.zeros(size, dtype=np.int64)
    for i in range(n):
        pop += (idx >> i) & 1
    # best[Y] = largest independent subset size of Y, arg[Y] = one such subset
    best = np.where(ind, pop, -1)
    arg = idx.copy()
    extend = np.zeros(size, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        has = (idx & bit) != 0
        lower_ = idx[has] ^ bit
        take = best[lower_] > best[has]
        hi = idx[has]
        best[hi[take]] = best[lower_[take]]
        arg[hi[take]] = arg[lower_[take]]
        # element i extends B when B lacks i and B + i is independent
        extend[~has & ind[idx | bit]] |= bit
    Y = (size - 1) & ~extend
    bad = ind & (best[Y] > pop)
    if bad.any():
        B = int(np.flatnonzero(bad)[0])
        return AxiomVerdict(False, "exchange", int(arg[Y[B]]), B)
    return AxiomVerdict(True)


@dataclass
class FoolingCertificate:
    n: int
    k: int
    witness: int
    transcript_length: int
    distinct_queried: int
    replay_verdict: bool | None = None
    transcript_match: bool | None = None

    @property
    def witness_elements(self) -> list[int]:
        return [i + 1 for i in to_indices(self.witness)]


def _verdict(out) -> bool:
    return bool(getattr(out, "verdict", out))


def _recorded_run(solver, n: int, k: int, family: set[int]):
    from .gadgets import ESInstance

    transcript: list[int] = []

    def member(S):
        transcript.append(S)
        return S in family

    es = ESInstance(n, k, member)
    answer = _verdict(solver(es))
    return answer, transcript, es


def audited_es_run(solver, n: int, k: int):
    """Run a deterministic ES solver on the empty family and look for a blind spot.

    Returns (answer, QueryReport, certificate or None). A certificate names the
    smallest k-subset the solver never asked about; the solver is replayed on
    the family holding only that set to show it cannot tell the two apart.
    """
    if n > AUDIT_GUARD:
        raise GuardError(f"audit limited to n <= {AUDIT_GUARD}, got {n}")
    answer, transcript, es = _recorded_run(solver, n, k, set())
    report = QueryReport({"F": es.F.queries})
    seen = {S for S in transcript if popcount(S) == k}
    if answer or len(seen) == math.comb(n, k):
        return answer, report, None
    star = next(S for S in k_subsets(n, k) if S not in seen)
    replay, replay_transcript, _ = _recorded_run(solver, n, k, {star})
    cert = FoolingCertificate(n, k, star, len(transcript), len(seen),
                              replay_verdict=replay,
                              transcript_match=replay_transcript == transcript)
    return answer, report, cert
