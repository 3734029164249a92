"""Acceptance criteria 1-12. Each test carries a `criterion` marker and the
summary at the end of the run prints one PASS/FAIL line per criterion."""

import itertools
import math
import random
import time

import pytest

from conftest import max_common_independent
from matint.bits import from_indices, k_subsets, popcount
from matint.core import audited_es_run, greedy_basis, is_basis, rank, verify_matroid_axioms
from matint.gadgets import (Digraph, ESInstance, LMIInstance, ThreeDMInstance, all_digraphs,
                            emi_local_x, encode_3dm, encode_hampath, enumerate_su_matrices,
                            has_hamiltonian_path, has_perfect_3dm, reduce_es_to_emi,
                            reduce_es_to_lmi)
from matint.mls import (FAMILIES, ExtensionAlgorithm, ImplicitSetProblem, binary_entropy,
                        enumerative_extension, es_as_implicit_problem, g_family, listed_extension, log_binom,
                        monotone_local_search, phi, phi_growth_check)
from matint.solvers import (brute_force_emi, brute_force_extension, brute_force_lmi, extension_solve,
                            fixed_sample, matroid_intersection_2, solve_es_bruteforce,
                            solve_es_via_emi_reduction, truncated_enumeration)
from matint.zoo import (SetFamilyOracle, SUMatrix, g_matroid, graphic_matroid, grid_mask,
                        mask_points, partition_matroid, truncate, uniform_matroid)

criterion = pytest.mark.criterion


def family(n, k, masks):
    fam = frozenset(masks)
    return ESInstance(n, k, lambda S: S in fam)


def all_families(n, k):
    subs = list(k_subsets(n, k))
    for bits in range(1 << len(subs)):
        yield [subs[i] for i in range(len(subs)) if bits >> i & 1]


def random_matroid(r, n):
    kind = r.randrange(5)
    if kind == 0:
        return uniform_matroid(n, r.randint(0, n))
    if kind == 1:
        labels = [r.randrange(3) for _ in range(n)]
        blocks = [[i for i in range(n) if labels[i] == b] for b in range(3)]
        return partition_matroid(n, blocks, [r.randint(0, len(b)) for b in blocks])
    v = r.randint(2, 7)
    g = graphic_matroid([tuple(r.sample(range(v), 2)) for _ in range(n)])
    if kind == 2:
        return g
    return truncate(g, r.randint(0, v - 1))


# ---- 1 -----------------------------------------------------------------------

@criterion(1, "G-matroid axioms and paving, 2x2 all families and 3x3 seeded")
def test_criterion_01_g_matroid_axioms():
    start = time.perf_counter()
    ones = SUMatrix(2, 2, ((1, 1), (1, 1)))
    two_sets = list(k_subsets(4, 2))
    bad = 0
    for bits in range(1 << 6):
        fam = [two_sets[i] for i in range(6) if bits >> i & 1]
        M = g_matroid(ones, SetFamilyOracle.from_sets(2, 2, fam))
        bad += not verify_matroid_axioms(M).ok
        bad += sum(not M(S) for S in range(16) if popcount(S) < 2)

    mats = random.Random(2024).sample(list(enumerate_su_matrices(3, 2)), 20)
    for f in range(200):
        fr = random.Random(10_000 + f)
        fam = frozenset(S for S in range(1 << 9) if fr.random() < 0.5)
        G = SetFamilyOracle(3, 2, lambda S, fam=fam: S in fam)
        for L in mats:
            M = g_matroid(L, G)
            bad += not verify_matroid_axioms(M).ok
            bad += sum(not M(S) for S in range(1 << 9) if popcount(S) < L.K)
    assert bad == 0
    assert time.perf_counter() - start < 30


# ---- 2 -----------------------------------------------------------------------

@criterion(2, "diagonal G-matroid on the 2x2 grid has exactly five bases")
def test_criterion_02_diagonal_bases():
    ones = SUMatrix(2, 2, ((1, 1), (1, 1)))
    M = g_matroid(ones, SetFamilyOracle.from_sets(2, 2, [grid_mask([(1, 1), (2, 2)], 2)]))
    bases = {frozenset(mask_points(S, 2, 2)) for S in range(16) if is_basis(M, S)}
    listed = {frozenset(b) for b in (
        [(1, 1), (2, 2)],                                     # in G and L-perfect
        [(1, 1), (1, 2)], [(2, 1), (2, 2)],                  # two in one row
        [(1, 1), (2, 1)], [(1, 2), (2, 2)],                  # two in one column
    )}
    assert bases == listed


# ---- 3 -----------------------------------------------------------------------

@criterion(3, "ES equals exists-SU 3-MI on reduced instances, n=4, k in {2,3}")
def test_criterion_03_es_to_3mi_equivalence():
    start = time.perf_counter()
    Ls = list(enumerate_su_matrices(2, 2))
    disagreements = 0
    for k in (2, 3):
        for masks in all_families(4, k):
            es = family(4, k, masks)
            found = any(brute_force_lmi(reduce_es_to_lmi(es, L, 3)).verdict for L in Ls)
            disagreements += found != solve_es_bruteforce(es).verdict
    assert disagreements == 0
    assert time.perf_counter() - start < 60


# ---- 4 -----------------------------------------------------------------------

@criterion(4, "ES to EMI: {1,3,6} witness and n=4 singleton/empty equivalence")
def test_criterion_04_es_to_emi():
    S = from_indices([0, 2, 5])  # {1,3,6}
    inst = reduce_es_to_emi(family(6, 3, [S]))
    out = brute_force_emi(inst)
    assert out.verdict
    assert out.witness == emi_local_x(S, 6)
    grid = from_indices(inst.elements[i] for i in range(2 * 6) if out.witness >> i & 1)
    assert set(mask_points(grid, 6, 2)) == {(1, 1), (3, 1), (6, 1), (2, 2), (4, 2), (5, 2)}

    for k in range(5):
        assert not brute_force_emi(reduce_es_to_emi(family(4, k, []))).verdict
        for T in k_subsets(4, k):
            assert brute_force_emi(reduce_es_to_emi(family(4, k, [T]))).verdict


# ---- 5 -----------------------------------------------------------------------

@criterion(5, "Hamiltonian path and 3-DM encoders agree with direct search")
def test_criterion_05_encoders():
    disagreements = 0
    for n in (2, 3, 4):
        for g in all_digraphs(n):
            disagreements += brute_force_lmi(encode_hampath(g)).verdict != has_hamiltonian_path(g)

    r = random.Random(55)
    for _ in range(200):
        m = r.randint(1, 3)
        cells = list(itertools.product(range(1, m + 1), repeat=3))
        inst = ThreeDMInstance(m, r.sample(cells, r.randint(1, min(12, len(cells)))))
        disagreements += brute_force_lmi(encode_3dm(inst)).verdict != has_perfect_3dm(inst)
    assert disagreements == 0


def test_single_vertex_graph_has_trivial_path():
    # one vertex is a path by itself; the encoder needs at least one edge slot
    assert has_hamiltonian_path(Digraph(1, []))


# ---- 6 -----------------------------------------------------------------------

@criterion(6, "two-matroid intersection size equals brute-force maximum")
def test_criterion_06_matroid_intersection():
    r = random.Random(66)
    mismatches = 0
    for _ in range(200):
        n = r.randint(1, 10)
        m1, m2 = random_matroid(r, n), random_matroid(r, n)
        J = matroid_intersection_2(m1, m2)
        mismatches += not (m1(J) and m2(J))
        mismatches += popcount(J) != max_common_independent(n, m1, m2)
    assert mismatches == 0


# ---- 7 -----------------------------------------------------------------------

@criterion(7, "extension_solve agrees with brute-force extension, incl. bottom cases")
def test_criterion_07_extension():
    r = random.Random(77)
    reasons = {"size": 0, "dependent": 0, "search": 0}
    found = 0
    mismatches = 0
    for i in range(300):
        n = r.randint(1, 10)
        raw = [random_matroid(r, n) for _ in range(r.randint(2, 3))]
        rk = min(rank(m) for m in raw)
        inst = LMIInstance(n, [truncate(m, rk) for m in raw])
        if i % 3 == 0:
            # part of a basis of the first matroid, sized to complete it
            base = [e for e in range(n) if greedy_basis(inst.matroids[0]) >> e & 1]
            X = from_indices(r.sample(base, r.randint(0, len(base))))
            ell = rk - popcount(X)
        elif i % 3 == 1:
            X = from_indices(r.sample(range(n), r.randint(0, rk)))
            ell = rk - popcount(X)
        else:
            X = from_indices(r.sample(range(n), r.randint(0, n)))
            ell = r.randint(0, n - popcount(X))
        got = extension_solve(inst, X, ell)
        want = brute_force_extension(inst, X, ell)
        if (got is None) != (want is None):
            mismatches += 1
            continue
        if got is not None:
            found += 1
            mismatches += popcount(got) != ell or bool(got & X)
            mismatches += not all(is_basis(m, X | got) for m in inst.matroids)
        elif popcount(X) + ell != rk:
            reasons["size"] += 1
        elif any(not m(X) for m in inst.matroids):
            reasons["dependent"] += 1
        else:
            reasons["search"] += 1
    # X = {0} is independent and sized right, but every completion breaks a block
    left = partition_matroid(3, [[0, 1], [2]], [1, 1])
    right = partition_matroid(3, [[0, 2], [1]], [1, 1])
    blocked = LMIInstance(3, [left, right])
    assert extension_solve(blocked, 0b001, 1) is None is brute_force_extension(blocked, 0b001, 1)
    reasons["search"] += 1
    assert found > 0
    assert mismatches == 0
    assert all(v > 0 for v in reasons.values()), reasons


# ---- 8 -----------------------------------------------------------------------

@criterion(8, "MLS: empty family always no, planted n=12 k=6 yes-rate >= 0.568")
def test_criterion_08_mls_correctness():
    start = time.perf_counter()
    n, k, trials = 12, 6, 500
    ext = enumerative_extension(n)
    yes_on_empty = 0
    for seed in range(trials):
        es = ESInstance(n, k, lambda S: False)
        yes_on_empty += monotone_local_search(es_as_implicit_problem(es), ext, seed=seed).verdict
    assert yes_on_empty == 0

    hits = 0
    for seed in range(trials):
        star = from_indices(random.Random(800_000 + seed).sample(range(n), k))
        es = ESInstance(n, k, lambda S, star=star: S == star)
        res = monotone_local_search(es_as_implicit_problem(es), ext, seed=seed)
        if res.verdict:
            assert res.witness == star
            hits += 1
    floor = 1 - math.exp(-1) - 3 * math.sqrt(0.632 * 0.368 / trials)
    assert hits / trials >= floor, (hits, floor)
    assert time.perf_counter() - start < 120


# ---- 9 -----------------------------------------------------------------------

@criterion(9, "budget law: no-instance invocations equal plan, sum within bound")
def test_criterion_09_budget_law():
    count_mismatch, bound_violations = [], []
    for n in range(1, 21):
        never = ImplicitSetProblem(n, lambda S: False)
        for name in FAMILIES:
            g = g_family(name, n=n)
            res = monotone_local_search(never, listed_extension([], g), seed=n)
            if res.verdict or res.invocations != res.plan.total:
                count_mismatch.append((n, name, res.invocations, res.plan.total))
            if any(res.per_k[r.k] != r.repetitions for r in res.plan.rows):
                count_mismatch.append((n, name, "per-k"))
            log_bound = math.log2(n + 1) + n - phi(g, n)[0] + math.log2(n)
            if math.log2(res.plan.total) > log_bound + 1e-9:
                bound_violations.append((n, name))
    assert count_mismatch == []
    assert bound_violations == []


def test_budget_law_with_real_enumeration_small_n():
    # same accounting when the extension really searches
    for n in range(1, 11):
        for name in FAMILIES:
            g = g_family(name, n=n)
            never = ImplicitSetProblem(n, lambda S: False)
            ext = ExtensionAlgorithm(enumerative_extension(n).fn, g)
            res = monotone_local_search(never, ext, seed=1)
            assert res.invocations == res.plan.total


# ---- 10 ----------------------------------------------------------------------

@criterion(10, "entropy sandwich for all n <= 60")
def test_criterion_10_entropy_sandwich():
    violations = 0
    for n in range(1, 61):
        for k in range(n + 1):
            h = n * binary_entropy(k / n)
            lb = log_binom(n, k)
            violations += not (h - math.log2(n + 1) <= lb + 1e-9 and lb <= h + 1e-9)
    assert violations == 0


# ---- 11 ----------------------------------------------------------------------

@criterion(11, "Phi <= 0.15n and growth-ratio floors for alpha in {0.5,1,2}")
def test_criterion_11_phi_checks():
    start = time.perf_counter()
    violations = []
    for n in list(range(1, 513)) + [1 << i for i in range(10, 19)]:
        for name in FAMILIES:
            for alpha in (0.5, 1.0, 2.0):
                if name in ("one", "poly-n") and alpha != 1.0:
                    continue
                g = g_family(name, alpha, n=n)
                if phi(g, n)[0] > 0.15 * n:
                    violations.append((name, alpha, n))
    ns = [1 << i for i in range(10, 19)]
    for alpha in (0.5, 1.0, 2.0):
        for fam in ("klogk", "ksquare"):
            rep = phi_growth_check(alpha, ns, family=fam)
            if not rep.ok:
                violations.append((fam, alpha, rep.ratios))
    assert violations == []
    assert time.perf_counter() - start < 60


# ---- 12 ----------------------------------------------------------------------

@criterion(12, "fooling audit: sub-enumeration solvers certified, enumeration not")
def test_criterion_12_fooling_audit():
    n, k = 6, 3
    subs = list(k_subsets(n, k))
    solvers = [truncated_enumeration(limit) for limit in range(20)]
    r = random.Random(12)
    for _ in range(40):
        chosen = r.sample(subs, r.randint(0, 19))
        solvers.append(fixed_sample(chosen))
        # repeats and wrong-size queries do not count as distinct k-subsets
        noise = [from_indices([0])] + chosen + chosen[:3]
        solvers.append(fixed_sample(noise))
    for solver in solvers:
        answer, report, cert = audited_es_run(solver, n, k)
        assert not answer
        assert cert is not None and cert.distinct_queried < 20
        assert popcount(cert.witness) == k
        assert cert.transcript_match and not cert.replay_verdict

    for solver in (solve_es_bruteforce, solve_es_via_emi_reduction):
        answer, report, cert = audited_es_run(solver, n, k)
        assert not answer and cert is None
