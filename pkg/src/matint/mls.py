"""Monotone Local Search: sample a t-subset, extend it by k-t elements.

Time bounds g are carried in the log2 domain as `LogTimeFunction`s so that
fast-growing g never needs big numbers in the hot path.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .bits import expand, from_indices, full, k_subsets, popcount, to_indices
from .core import Oracle, is_basis

FAMILIES = ("one", "exp", "klogk", "ksquare", "poly-n")


# ---- binomials and entropy -------------------------------------------------

def binom_exact(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return math.comb(n, k)


@lru_cache(maxsize=1 << 16)
def log_binom(n: int, k: int) -> float:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if n <= 1000:
        return math.log2(math.comb(n, k))
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError("entropy argument must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


# ---- time functions --------------------------------------------------------

class LogTimeFunction:
    """log2 g(ell) as a callable. g(0) must be 1.

    `exact`, when given, returns g(ell) as an int for exact-arithmetic checks.
    """

    def __init__(self, name: str, log2g: Callable[[int], float],
                 exact: Callable[[int], int] | None = None):
        if abs(log2g(0)) > 1e-12:
            raise ValueError("time function must satisfy g(0) = 1")
        self.name = name
        self._f = log2g
        self.exact = exact

    def __call__(self, ell: int) -> float:
        return self._f(ell)

    def __repr__(self):
        return f"LogTimeFunction({self.name!r})"


def _floor_pow2(x: float) -> int:
    """floor(2**x) for x >= 0, exact up to float rounding of the mantissa."""
    i = math.floor(x)
    if i < 53:
        return math.floor(2.0 ** x)
    return int(2.0 ** (x - i) * (1 << 52)) << (i - 52)


def _log_floor_pow2(x: float) -> float:
    # past 53 bits the floor moves log2 by less than 2^-53
    if x >= 53:
        return x
    return math.log2(_floor_pow2(x))


def g_family(name: str, alpha: float = 1.0, n: int | None = None) -> LogTimeFunction:
    """Named time bounds.

    one: 1; exp: floor 2^(alpha l); klogk: floor 2^(alpha l log l);
    ksquare: floor 2^(alpha l^2); poly-n: n^l.
    """
    if name == "one":
        return LogTimeFunction("one", lambda l: 0.0, lambda l: 1)
    if name == "exp":
        return LogTimeFunction(f"exp({alpha})", lambda l: _log_floor_pow2(alpha * l),
                               lambda l: _floor_pow2(alpha * l))
    if name == "klogk":
        ex = lambda l: alpha * l * math.log2(l) if l > 1 else 0.0
        return LogTimeFunction(f"klogk({alpha})", lambda l: _log_floor_pow2(ex(l)),
                               lambda l: _floor_pow2(ex(l)))
    if name == "ksquare":
        return LogTimeFunction(f"ksquare({alpha})", lambda l: _log_floor_pow2(alpha * l * l),
                               lambda l: _floor_pow2(alpha * l * l))
    if name == "poly-n":
        if n is None or n < 1:
            raise ValueError("poly-n needs the ground set size n")
        lg = math.log2(n)
        return LogTimeFunction(f"poly-n({n})", lambda l: l * lg, lambda l: n ** l)
    raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")


# ---- planning --------------------------------------------------------------

def _cost(n: int, k: int, t: int, g: LogTimeFunction) -> float:
    return log_binom(n, t) - log_binom(k, t) + g(k - t)


def optimal_t(n: int, k: int, g: LogTimeFunction) -> tuple[int, float]:
    """argmin over t of C(n,t)/C(k,t) * g(k-t), in log2; smallest t on ties."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    best_t, best = 0, _cost(n, k, 0, g)
    for t in range(1, k + 1):
        c = _cost(n, k, t, g)
        if c < best - 1e-12 * max(1.0, abs(best)):
            best_t, best = t, c
    return best_t, best


def repetitions(n: int, k: int, t: int) -> int:
    """ceil(2 C(n,t) / C(k,t))."""
    return -(-2 * math.comb(n, t) // math.comb(k, t))


@dataclass
class PlanRow:
    k: int
    t: int
    log2_repetitions: float
    repetitions: int


@dataclass
class BudgetPlan:
    n: int
    rows: list[PlanRow] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(r.repetitions for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "t", "log2_repetitions", "repetitions"])
        for r in self.rows:
            w.writerow([r.k, r.t, f"{r.log2_repetitions:.6f}", r.repetitions])
        return buf.getvalue()


def budget_plan(n: int, g: LogTimeFunction) -> BudgetPlan:
    plan = BudgetPlan(n)
    for k in range(n + 1):
        t, _ = optimal_t(n, k, g)
        plan.rows.append(PlanRow(k, t, 1 + log_binom(n, t) - log_binom(k, t), repetitions(n, k, t)))
    return plan


# ---- problems and extension algorithms --------------------------------------

class ImplicitSetProblem:
    """Ground set [0, n) plus a counting membership test for the solution family."""

    def __init__(self, n: int, member: Callable[[int], bool], encoding=None, name: str = "member"):
        self.n = n
        self.encoding = encoding
        self.oracle = Oracle(n, member, name=name)

    def member(self, S: int) -> bool:
        return self.oracle(S)

    @property
    def queries(self) -> int:
        return self.oracle.queries


@dataclass
class ExtensionAlgorithm:
    """fn(problem, X, ell, seed) returns S with X + S in F and |S| = ell, or None."""

    fn: Callable[[ImplicitSetProblem, int, int, int], int | None]
    log_time: LogTimeFunction
    name: str = "ext"

    def __call__(self, problem: ImplicitSetProblem, X: int, ell: int, seed: int):
        return self.fn(problem, X, ell, seed)


def enumerative_extension(n: int) -> ExtensionAlgorithm:
    """Try every ell-subset outside X in ascending order. Declared time n^ell."""

    def fn(problem, X, ell, seed):
        if ell == 0:
            return 0 if problem.member(X) else None
        rest = to_indices(full(problem.n) & ~X)
        for sub in k_subsets(len(rest), ell):
            S = expand(sub, rest)
            if problem.member(X | S):
                return S
        return None

    return ExtensionAlgorithm(fn, g_family("poly-n", n=max(n, 1)), name="enumerative")


def listed_extension(family: Sequence[int], log_time: LogTimeFunction) -> ExtensionAlgorithm:
    """Exact extension over an explicitly listed family; scans it in order.

    The declared time is whatever `log_time` says, which lets budget
    accounting run for any g without paying for enumeration.
    """
    members = tuple(family)

    def fn(problem, X, ell, seed):
        for T in members:
            if T & X == X and popcount(T) == popcount(X) + ell and problem.member(T):
                return T & ~X
        return None

    return ExtensionAlgorithm(fn, log_time, name=f"listed/{log_time.name}")


def lmi_as_implicit_problem(inst) -> ImplicitSetProblem:
    """Solutions are the common bases of the instance's matroids."""
    mats = inst.matroids
    return ImplicitSetProblem(inst.n, lambda S: all(is_basis(m, S) for m in mats),
                              encoding=inst, name="common-basis")


def lmi_extension(inst) -> ExtensionAlgorithm:
    """Contract-and-solve extension with the stand-in solver; declared time |E|^ell."""
    from .solvers import extension_solve

    def fn(problem, X, ell, seed):
        return extension_solve(problem.encoding, X, ell)

    return ExtensionAlgorithm(fn, g_family("poly-n", n=max(inst.n, 1)), name="lmi-extension")


def es_as_implicit_problem(es) -> ImplicitSetProblem:
    return ImplicitSetProblem(es.n, es.F, encoding=es, name="F")


# ---- the search itself -----------------------------------------------------

def sample(problem: ImplicitSetProblem, k: int, t: int, ext: ExtensionAlgorithm, seed):
    """Draw a uniform t-subset X and ask ext to add k - t elements.

    `seed` is an int or a random.Random to draw from directly.
    Returns the completed set X + S, or None when ext fails.
    """
    if not 0 <= t <= k <= problem.n:
        raise ValueError("need 0 <= t <= k <= n")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    X = from_indices(rng.sample(range(problem.n), t))
    S = ext(problem, X, k - t, rng.getrandbits(64))
    if S is None:
        return None
    if S & X or popcount(S) != k - t:
        raise RuntimeError("extension returned a set that is not a (k-t)-extension")
    return X | S


@dataclass
class MLSResult:
    verdict: bool
    witness: int | None
    plan: BudgetPlan
    invocations: int
    per_k: dict[int, int]

    def __bool__(self):
        return self.verdict


def monotone_local_search(problem: ImplicitSetProblem, ext: ExtensionAlgorithm,
                          seed: int = 0, early_exit: bool = True) -> MLSResult:
    """Run the planned number of samples for each k = 0..n.

    All draws come from one generator seeded once, so a seed fixes the run.
    A found set is re-checked with the membership oracle before it is trusted.
    """
    plan = budget_plan(problem.n, ext.log_time)
    master = random.Random(seed)
    per_k: dict[int, int] = {}
    invocations = 0
    witness = None
    for row in plan.rows:
        per_k[row.k] = 0
        for _ in range(row.repetitions):
            W = sample(problem, row.k, row.t, ext, master)
            invocations += 1
            per_k[row.k] += 1
            if W is not None:
                if not problem.member(W):
                    raise RuntimeError("extension produced a set outside the family")
                if witness is None:
                    witness = W
                if early_exit:
                    return MLSResult(True, witness, plan, invocations, per_k)
    return MLSResult(witness is not None, witness, plan, invocations, per_k)


# ---- budget analysis -------------------------------------------------------

def phi(g: LogTimeFunction, n: int) -> tuple[float, int]:
    """max over 0 <= l <= n/4 of l log2(n / 4l) - log2 g(l); the l = 0 term is 0."""
    if n < 1:
        raise ValueError("need n >= 1")
    best, arg = 0.0, 0
    for ell in range(1, n // 4 + 1):
        v = ell * math.log2(n / (4 * ell)) - g(ell)
        if v > best:
            best, arg = v, ell
    return best, arg


@lru_cache(maxsize=1024)
def _log_binom_row(n: int) -> np.ndarray:
    row = np.array([log_binom(n, t) for t in range(n + 1)])
    row.setflags(write=False)
    return row


def psi(g: LogTimeFunction, n: int) -> float:
    """log2 of max over k of min over t of C(n,t)/C(k,t) * g(k-t)."""
    if n < 1:
        raise ValueError("need n >= 1")
    G = np.array([g(l) for l in range(n + 1)])
    top = _log_binom_row(n)
    best = -math.inf
    for k in range(n + 1):
        costs = top[:k + 1] - _log_binom_row(k) + G[k::-1]
        best = max(best, float(costs.min()))
    return best


@dataclass
class GrowthReport:
    family: str
    alpha: float
    ns: list[int]
    phis: list[float]
    ratios: list[float]
    floor: float
    monotone: bool

    @property
    def min_ratio(self) -> float:
        return min(self.ratios)

    @property
    def ok(self) -> bool:
        return self.monotone and self.min_ratio >= self.floor > 0


def phi_growth_check(alpha: float, ns: Sequence[int], family: str = "klogk") -> GrowthReport:
    """Tabulate Phi against its expected growth and compare to half the first ratio.

    klogk is scaled by n^(1/(1+alpha)), ksquare by log2(n)^2.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if family not in ("klogk", "ksquare"):
        raise ValueError("growth check covers klogk and ksquare")
    if any(n > 1 << 20 for n in ns):
        raise ValueError("n values limited to 2^20")
    g = g_family(family, alpha)
    phis, ratios = [], []
    for n in ns:
        v, _ = phi(g, n)
        scale = n ** (1 / (1 + alpha)) if family == "klogk" else math.log2(n) ** 2
        phis.append(v)
        ratios.append(v / scale)
    monotone = all(b >= a for a, b in zip(phis, phis[1:]))
    return GrowthReport(family, alpha, list(ns), phis, ratios, 0.5 * ratios[0], monotone)
