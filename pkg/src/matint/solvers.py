"""Decision procedures for matroid intersection and Empty Set.

Every enumeration walks subsets in increasing bitmask order so query
transcripts are reproducible.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .bits import compress, expand, full, k_subsets, popcount, to_indices
from .core import GuardError, Oracle, QueryReport, contract, is_basis, rank, restrict
from .gadgets import (EMIInstance, ESInstance, LMIInstance, enumerate_su_matrices, grid_side,
                      reduce_es_to_emi, reduce_es_to_lmi)

BRUTE_GUARD = 24
ES_GUARD = 1 << 24


@dataclass
class SolveOutcome:
    verdict: bool
    witness: int | None = None
    report: QueryReport = field(default_factory=QueryReport)

    def __bool__(self):
        return self.verdict


def _baseline(oracles: Iterable[Oracle]) -> dict[int, int]:
    return {id(o): o.queries for o in oracles}


def brute_force_lmi(inst: LMIInstance) -> SolveOutcome:
    """First k-subset (k = rank of the first matroid) that is a basis of all matroids."""
    if inst.n > BRUTE_GUARD:
        raise GuardError(f"brute force limited to {BRUTE_GUARD} elements")
    mats = inst.matroids
    base = _baseline(mats)
    k = rank(mats[0])
    for S in k_subsets(inst.n, k):
        if all(is_basis(m, S) for m in mats):
            return SolveOutcome(True, S, QueryReport.of(mats, base))
    return SolveOutcome(False, None, QueryReport.of(mats, base))


def parameterized_lmi_stand_in(inst: LMIInstance) -> SolveOutcome:
    """Stand-in for a parameterized ell-MI algorithm; same contract as brute_force_lmi.

    Its nominal running time is |E|^ell for a solution of size ell, see
    `stand_in_log_time`.
    """
    return brute_force_lmi(inst)


def stand_in_log_time(ground_size: int) -> Callable[[int], float]:
    lg = math.log2(ground_size) if ground_size > 1 else 0.0
    return lambda ell: ell * lg


def brute_force_emi(inst: EMIInstance) -> SolveOutcome:
    """First common basis with exactly k red elements, scanning r-subsets in order."""
    if inst.n > BRUTE_GUARD:
        raise GuardError(f"brute force limited to {BRUTE_GUARD} elements")
    mats = [inst.m1, inst.m2]
    base = _baseline(mats)
    if inst.k > popcount(inst.red):
        return SolveOutcome(False, None, QueryReport.of(mats, base))
    r = rank(inst.m1)
    for S in k_subsets(inst.n, r):
        if popcount(S & inst.red) != inst.k:
            continue
        if inst.m1(S) and is_basis(inst.m2, S):
            return SolveOutcome(True, S, QueryReport.of(mats, base))
    return SolveOutcome(False, None, QueryReport.of(mats, base))


def matroid_intersection_2(m1: Oracle, m2: Oracle) -> int:
    """Maximum common independent set by shortest augmenting paths.

    Exchange graph over the current S: arc y->x when S-y+x is independent in
    m1, arc x->y when S-y+x is independent in m2 (y in S, x outside). Paths
    run from elements addable in m1 to elements addable in m2. BFS visits
    vertices in ascending index order.
    """
    if m1.n != m2.n:
        raise ValueError("matroids must share the ground set")
    n = m1.n
    S = 0
    while True:
        inside = to_indices(S)
        outside = [x for x in range(n) if not S >> x & 1]
        sources = [x for x in outside if m1(S | 1 << x)]
        sinks = {x for x in outside if m2(S | 1 << x)}
        if not sources or not sinks:
            return S
        adj: dict[int, list[int]] = {v: [] for v in range(n)}
        for y in inside:
            for x in outside:
                T = S & ~(1 << y) | 1 << x
                if m1(T):
                    adj[y].append(x)
                if m2(T):
                    adj[x].append(y)
        prev: dict[int, int | None] = {}
        queue = deque()
        for s in sources:
            prev[s] = None
            queue.append(s)
        end = None
        while queue:
            v = queue.popleft()
            if v in sinks:
                end = v
                break
            for w in sorted(adj[v]):
                if w not in prev:
                    prev[w] = v
                    queue.append(w)
        if end is None:
            return S
        v = end
        while v is not None:
            S ^= 1 << v
            v = prev[v]


def extension_solve(inst: LMIInstance, X: int, ell: int,
                    inner: Callable[[LMIInstance], SolveOutcome] = parameterized_lmi_stand_in):
    """Find S with |S| = ell and X + S a common basis, or None.

    Cheap rejections come first: a size mismatch against the rank costs no
    inner call, and a dependent X is caught before contracting.
    """
    r = rank(inst.matroids[0])
    if popcount(X) + ell != r:
        return None
    if any(not m(X) for m in inst.matroids):
        return None
    contracted = [contract(m, X) for m in inst.matroids]
    out = inner(LMIInstance(inst.n - popcount(X), contracted))
    if not out.verdict:
        return None
    S = expand(out.witness, contracted[0].elements)
    if popcount(S) != ell:
        raise AssertionError("inner solver returned a set of the wrong size")
    return S


def brute_force_extension(inst: LMIInstance, X: int, ell: int):
    """Reference: smallest S outside X with |S| = ell and X + S a common basis."""
    rest = to_indices(full(inst.n) & ~X)
    for sub in k_subsets(len(rest), ell):
        S = expand(sub, rest)
        if all(is_basis(m, X | S) for m in inst.matroids):
            return S
    return None


def emi_via_red_enumeration(inst: EMIInstance) -> SolveOutcome:
    """Pick k red elements, then fill with blues by two-matroid intersection."""
    mats = [inst.m1, inst.m2]
    base = _baseline(mats)
    done = lambda v, w=None: SolveOutcome(v, w, QueryReport.of(mats, base))
    if inst.k > popcount(inst.red):
        return done(False)
    r = rank(inst.m1)
    if rank(inst.m2) != r or r < inst.k:
        return done(False)
    blue = full(inst.n) & ~inst.red
    for Rs in k_subsets(inst.n, inst.k):
        if Rs & ~inst.red or not inst.m1(Rs) or not inst.m2(Rs):
            continue
        parts = []
        for m in mats:
            c = contract(m, Rs)
            parts.append(restrict(c, compress(blue, c.elements)))
        J = matroid_intersection_2(*parts)
        if popcount(J) == r - inst.k:
            c_elems = [e for e in range(inst.n) if not Rs >> e & 1]
            B = Rs | expand(expand(J, parts[0].elements), c_elems)
            return done(True, B)
    return done(False)


# ---- Empty Set solvers -------------------------------------------------------

def _es_report(es: ESInstance, start: int) -> QueryReport:
    return QueryReport({es.F.name: es.F.queries - start})


def solve_es_bruteforce(es: ESInstance) -> SolveOutcome:
    if math.comb(es.n, es.k) > ES_GUARD:
        raise GuardError("too many k-subsets to enumerate")
    start = es.F.queries
    for S in k_subsets(es.n, es.k):
        if es.F(S):
            return SolveOutcome(True, S, _es_report(es, start))
    return SolveOutcome(False, None, _es_report(es, start))


def solve_es_via_lmi_reduction(es: ESInstance, ell: int = 3,
                               lmi: Callable[[LMIInstance], SolveOutcome] = brute_force_lmi,
                               skip_other_sizes: bool = True) -> SolveOutcome:
    """Decide ES by asking an ell-MI solver about one reduced instance per SU matrix.

    Sizes k in {0, 1, n} have no reduced instance and are decided directly.
    A matrix with column sum K != k can only lead to G-queries on K-sets,
    which F rejects, so by default those matrices are skipped. Pass
    skip_other_sizes=False to run every matrix.
    """
    d = ell - 1
    N = grid_side(es.n, d)
    start = es.F.queries
    n, k = es.n, es.k
    if k == n or k == 0:
        S = full(n) if k == n else 0
        ok = es.F(S)
        return SolveOutcome(ok, S if ok else None, _es_report(es, start))
    if k == 1:
        for e in range(n):
            if es.F(1 << e):
                return SolveOutcome(True, 1 << e, _es_report(es, start))
        return SolveOutcome(False, None, _es_report(es, start))
    for L in enumerate_su_matrices(N, d, relaxed=d >= 3):
        if skip_other_sizes and L.K != k:
            continue
        out = lmi(reduce_es_to_lmi(es, L, ell))
        if out.verdict:
            return SolveOutcome(True, out.witness, _es_report(es, start))
    return SolveOutcome(False, None, _es_report(es, start))


def solve_es_via_emi_reduction(es: ESInstance,
                               emi: Callable[[EMIInstance], SolveOutcome] = brute_force_emi) -> SolveOutcome:
    start = es.F.queries
    out = emi(reduce_es_to_emi(es))
    S = None
    if out.verdict:
        S = 0
        for s in range(es.n):
            if out.witness >> (2 * s) & 1:
                S |= 1 << s
    return SolveOutcome(out.verdict, S, _es_report(es, start))


def truncated_enumeration(limit: int):
    """ES solver that asks about the first `limit` k-subsets and then gives up."""
    def solve(es: ESInstance) -> SolveOutcome:
        start = es.F.queries
        for i, S in enumerate(k_subsets(es.n, es.k)):
            if i >= limit:
                break
            if es.F(S):
                return SolveOutcome(True, S, _es_report(es, start))
        return SolveOutcome(False, None, _es_report(es, start))
    return solve


def fixed_sample(sets: Iterable[int]):
    """ES solver that asks about a fixed list of masks and answers from those alone."""
    sets = list(sets)

    def solve(es: ESInstance) -> SolveOutcome:
        start = es.F.queries
        for S in sets:
            if es.F(S):
                return SolveOutcome(True, S, _es_report(es, start))
        return SolveOutcome(False, None, _es_report(es, start))
    return solve
