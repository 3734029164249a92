import itertools
import random

import pytest

from matint.bits import popcount


# ---- reference implementations, written without the package's helpers ------

def naive_axioms(n, indep):
    """Direct pairwise axiom check over explicit sets; returns True/False."""
    sets = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    I = {s for s in sets if indep(s)}
    if frozenset() not in I:
        return False
    for s in I:
        for e in s:
            if s - {e} not in I:
                return False
    for A in I:
        for B in I:
            if len(A) > len(B) and not any(B | {a} in I for a in A - B):
                return False
    return True


def to_mask(s):
    m = 0
    for e in s:
        m |= 1 << e
    return m


def su_bruteforce(N, d):
    """All N x d matrices over 0..N filtered by the SU conditions."""
    out = []
    for flat in itertools.product(range(N + 1), repeat=N * d):
        cols = [flat[j * N:(j + 1) * N] for j in range(d)]
        sums = {sum(c) for c in cols}
        if len(sums) == 1 and 2 <= sums.pop() <= N ** d - 1:
            out.append(tuple(cols))
    return out


def max_common_independent(n, m1, m2):
    best = 0
    for S in range(1 << n):
        c = popcount(S)
        if c > best and m1(S) and m2(S):
            best = c
    return best


# ---- acceptance reporting ----------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, text = mark.args
    prev = _CRITERIA.get(num, (text, "PASS"))
    if rep.failed:
        _CRITERIA[num] = (text, "FAIL")
    elif rep.when == "call" and rep.skipped:
        _CRITERIA[num] = (text, "SKIP")
    elif rep.when == "call":
        _CRITERIA[num] = prev


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        text, status = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {text}")


@pytest.fixture
def rng():
    return random.Random(12345)
