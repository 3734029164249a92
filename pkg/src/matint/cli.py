"""Command-line driver.

Exit status: 0 on a clean run, 2 on malformed input or configuration,
3 when an instance exceeds a size guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import random
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from .bits import k_subsets, to_indices
from .core import GuardError, QueryReport, audited_es_run, is_basis, verify_matroid_axioms
from .formats import (ParseError, es_from_family_text, parse_3dm, parse_digraph, parse_dimacs,
                      read_text)
from .gadgets import ESInstance, encode_3dm, encode_hampath, es_from_sat, reduce_es_to_emi
from .mls import (FAMILIES, budget_plan, enumerative_extension, es_as_implicit_problem, g_family,
                  monotone_local_search, phi, phi_growth_check, psi)
from .solvers import (brute_force_emi, brute_force_lmi, parameterized_lmi_stand_in,
                      solve_es_bruteforce, solve_es_via_emi_reduction, solve_es_via_lmi_reduction,
                      truncated_enumeration)
from .zoo import small_zoo, truncate

log = logging.getLogger("matint")

PROBLEMS = ("lmi", "emi", "es-brute", "es-via-lmi", "es-via-emi", "mls", "3dm", "hampath")
ES_SOURCES = ("explicit", "sat", "planted", "empty", "random")
AUDIT_SOLVERS = ("es-brute", "es-via-lmi", "es-via-emi", "truncated")
DEFAULT_SEED = 0


# ---- instance construction ---------------------------------------------------

def build_es(args, trial: int = 0) -> ESInstance:
    """ES instance from --family; generated families use seed + trial."""
    src = args.family or "explicit"
    if src == "sat":
        cnf = parse_dimacs(read_text(_need(args.input, "--input")))
        return es_from_sat(cnf, _need(args.k, "--k"))
    n, k = _need(args.n, "--n"), _need(args.k, "--k")
    if not 0 <= k <= n:
        raise ParseError("need 0 <= k <= n")
    if src == "explicit":
        return es_from_family_text(read_text(_need(args.input, "--input")), n, k)
    rng = random.Random(args.seed + trial)
    if src == "empty":
        return ESInstance(n, k, lambda S: False)
    if src == "planted":
        star = sum(1 << e for e in rng.sample(range(n), k))
        return ESInstance(n, k, lambda S: S == star)
    if src == "random":
        fam = frozenset(S for S in k_subsets(n, k) if rng.random() < args.density)
        return ESInstance(n, k, lambda S: S in fam)
    raise ParseError(f"unknown ES family {src!r}")


def _need(value, flag):
    if value is None:
        raise ParseError(f"{flag} is required here")
    return value


def _elements(mask: int) -> str:
    return " ".join(str(i + 1) for i in to_indices(mask))


def _queries(report) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(report.counts.items()))


# ---- output ------------------------------------------------------------------

@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


ROW_FIELDS = ["instance", "solver", "verdict", "witness", "valid", "queries", "total_queries"]


def _writer(fh, timing: bool):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(ROW_FIELDS + (["wall_time"] if timing else []))
    return w


def _row(w, timing, instance, solver, verdict, witness, valid, report, t0):
    row = [instance, solver, "yes" if verdict else "no", witness, valid,
           _queries(report), report.total]
    if timing:
        row.append(f"{time.perf_counter() - t0:.6f}")
    w.writerow(row)


# ---- subcommands -------------------------------------------------------------

def _solve_encoded(args, w):
    fmt = args.problem if args.problem in ("3dm", "hampath") else args.format
    text = read_text(_need(args.input, "--input"))
    if fmt == "3dm":
        inst_src = parse_3dm(text)
        build = lambda: encode_3dm(inst_src)
        show = lambda W: " ".join(str(i + 1) for i in to_indices(W))
    elif fmt in ("hampath", "digraph"):
        inst_src = parse_digraph(text)
        build = lambda: encode_hampath(inst_src)
        show = lambda W: " ".join(f"{u}>{v}" for u, v in (inst_src.edges[i] for i in to_indices(W)))
    else:
        raise ParseError("--format must be 3dm or digraph")
    solver = parameterized_lmi_stand_in if args.problem == "lmi" else brute_force_lmi
    t0 = time.perf_counter()
    inst = build()
    out = solver(inst)
    valid = ""
    if out.verdict:
        fresh = build()
        valid = all(is_basis(m, out.witness) for m in fresh.matroids)
        show_w = show(out.witness)
    else:
        show_w = ""
    _row(w, args.timing, Path(args.input).name, args.problem, out.verdict, show_w, valid,
         out.report, t0)


def _es_label(args, trial):
    if args.input:
        return Path(args.input).name
    return f"{args.family}-n{args.n}-k{args.k}-s{args.seed + trial}"


def _solve_es(args, w, trial):
    es = build_es(args, trial)
    t0 = time.perf_counter()
    label = _es_label(args, trial)
    if args.problem == "mls":
        problem = es_as_implicit_problem(es)
        ext = enumerative_extension(es.n)
        if args.g:
            ext.log_time = g_family(args.g, args.alpha, es.n)
        res = monotone_local_search(problem, ext, seed=args.seed + trial)
        report = QueryReport({"F": es.F.queries})
        verdict, witness = res.verdict, res.witness
    elif args.problem == "emi":
        inst = reduce_es_to_emi(es)
        out = brute_force_emi(inst)
        verdict, report = out.verdict, out.report
        witness = None
        if verdict:
            witness = sum(1 << s for s in range(es.n) if out.witness >> (2 * s) & 1)
    else:
        solver = {"es-brute": solve_es_bruteforce,
                  "es-via-lmi": lambda e: solve_es_via_lmi_reduction(e, args.ell),
                  "es-via-emi": solve_es_via_emi_reduction}[args.problem]
        out = solver(es)
        verdict, witness, report = out.verdict, out.witness, out.report
    valid = ""
    if verdict:
        valid = build_es(args, trial).F(witness)
    _row(w, args.timing, label, args.problem, verdict,
         _elements(witness) if verdict else "", valid, report, t0)


def cmd_solve(args) -> int:
    # rows are buffered so a failing instance leaves no partial output behind
    buf = io.StringIO()
    w = _writer(buf, args.timing)
    if args.problem in ("3dm", "hampath", "lmi"):
        _solve_encoded(args, w)
    else:
        for trial in range(args.trials):
            _solve_es(args, w, trial)
    with _sink(args.out) as fh:
        fh.write(buf.getvalue())
    return 0


def cmd_audit(args) -> int:
    n, k = _need(args.n, "--n"), _need(args.k, "--k")
    solver = {"es-brute": solve_es_bruteforce,
              "es-via-lmi": lambda e: solve_es_via_lmi_reduction(e, args.ell),
              "es-via-emi": solve_es_via_emi_reduction,
              "truncated": truncated_enumeration(args.limit)}[args.solver]
    answer, report, cert = audited_es_run(solver, n, k)
    total = math.comb(n, k)
    with _sink(args.out) as fh:
        print(f"solver: {args.solver}", file=fh)
        print(f"answer: {'yes' if answer else 'no'}", file=fh)
        print(f"queries: {report.total}", file=fh)
        print(f"k-subsets: {total}", file=fh)
        if cert is None:
            print("no certificate (full coverage)" if not answer else "no certificate", file=fh)
        else:
            print(f"distinct queried: {cert.distinct_queried}", file=fh)
            print(f"certificate: unqueried witness {{{', '.join(map(str, cert.witness_elements))}}}",
                  file=fh)
            print(f"replay on {{witness}}: answer {'yes' if cert.replay_verdict else 'no'}, "
                  f"identical transcript {cert.transcript_match}", file=fh)
    return 0


def _ns(args, default):
    if not args.ns:
        return default
    try:
        return [int(x) for x in args.ns.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad --ns list {args.ns!r}") from None


def cmd_phi_table(args) -> int:
    name = args.family or "one"
    if name not in FAMILIES:
        raise ParseError(f"unknown family {name!r}")
    ns = _ns(args, [4, 8, 16, 32, 64, 128, 256])
    with _sink(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "phi", "argmax_l", "log2_psi", "bound", "psi_within_bound", "phi_le_0.15n"])
        for n in ns:
            g = g_family(name, args.alpha, n)
            v, arg = phi(g, n)
            lp = psi(g, n)
            bound = n - v + math.log2(n)
            w.writerow([n, f"{v:.6f}", arg, f"{lp:.6f}", f"{bound:.6f}",
                        lp <= bound + 1e-9, v <= 0.15 * n + 1e-9])
        if args.growth:
            for fam in ("klogk", "ksquare"):
                rep = phi_growth_check(args.alpha, [1 << i for i in range(10, 19)], fam)
                w.writerow([f"growth:{fam}", f"{rep.min_ratio:.6f}", "", "", f"{rep.floor:.6f}",
                            rep.ok, ""])
    return 0


def cmd_mls_bench(args) -> int:
    ns = _ns(args, [6, 8, 10, 12])
    with _sink(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "k", "g", "plan_total", "no_invocations", "no_matches_plan",
                    "yes_trials", "yes_rate", "plan_over_2^n", "psi_over_2^n"])
        for n in ns:
            k = args.k if args.k is not None else n // 2
            g = g_family(args.g or "poly-n", args.alpha, n)
            ext = enumerative_extension(n)
            ext.log_time = g
            plan = budget_plan(n, g)
            empty = ESInstance(n, k, lambda S: False)
            no = monotone_local_search(es_as_implicit_problem(empty), ext, seed=args.seed)
            hits = 0
            for trial in range(args.trials):
                rng = random.Random(args.seed + trial)
                star = sum(1 << e for e in rng.sample(range(n), k))
                es = ESInstance(n, k, lambda S, star=star: S == star)
                hits += monotone_local_search(es_as_implicit_problem(es), ext,
                                              seed=args.seed + trial).verdict
            w.writerow([n, k, g.name, plan.total, no.invocations, no.invocations == plan.total,
                        args.trials, f"{hits / args.trials:.4f}", f"{plan.total / 2 ** n:.6f}",
                        f"{2 ** psi(g, n) / 2 ** n:.6f}"])
    return 0


def cmd_verify(args) -> int:
    failures = 0
    with _sink(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["matroid", "n", "check", "result"])
        for label, m in small_zoo(args.seed):
            for tag, oracle in (("axioms", m), ("truncated axioms", truncate(m, max(0, m.n // 2)))):
                v = verify_matroid_axioms(oracle)
                failures += not v.ok
                w.writerow([label, m.n, tag, "pass" if v.ok else f"fail:{v.violation}"])
    return 0 if failures == 0 else 1


# ---- argument handling -------------------------------------------------------

def read_config(path) -> dict:
    """key=value lines; keys are long flag names with or without dashes."""
    cfg = {}
    for no, raw in enumerate(read_text(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"config line {no}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        cfg[key.lstrip("-").replace("-", "_")] = val
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; command-line flags take precedence")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--ell", type=int, default=3)
    common.add_argument("--family")
    common.add_argument("--alpha", type=float, default=1.0)
    common.add_argument("--g", help="declared time family for mls: " + ", ".join(FAMILIES))
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--input")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="matint", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="run a solver on an instance")
    s.add_argument("--problem", choices=PROBLEMS, required=True)
    s.add_argument("--format", choices=("3dm", "digraph"), default="digraph",
                   help="input format for --problem lmi")
    s.add_argument("--density", type=float, default=0.1, help="membership rate for random families")
    s.add_argument("--timing", action="store_true", help="append a wall_time column")
    s.set_defaults(func=cmd_solve)

    a = sub.add_parser("audit", parents=[common], help="fooling audit of an ES solver")
    a.add_argument("--solver", choices=AUDIT_SOLVERS, default="es-brute")
    a.add_argument("--limit", type=int, default=10, help="query budget for the truncated solver")
    a.set_defaults(func=cmd_audit)

    ph = sub.add_parser("phi-table", parents=[common], help="tabulate Phi and Psi")
    ph.add_argument("--ns", help="comma-separated n values")
    ph.add_argument("--growth", action="store_true", help="append growth-check rows")
    ph.set_defaults(func=cmd_phi_table)

    mb = sub.add_parser("mls-bench", parents=[common], help="MLS invocation accounting")
    mb.add_argument("--ns", help="comma-separated n values")
    mb.set_defaults(func=cmd_mls_bench)

    v = sub.add_parser("verify", parents=[common], help="axiom checks on the small matroid zoo")
    v.set_defaults(func=cmd_verify)
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    sub = argv[0] if argv else None
    target = parser._subparsers._group_actions[0].choices.get(sub) if sub else None
    if target is None:
        return
    types = {a.dest: a.type for a in target._actions}
    flags = {a.dest for a in target._actions if a.option_strings}
    for key, val in cfg.items():
        if key not in flags:
            raise ParseError(f"unknown config key {key!r}")
        conv = types.get(key)
        if isinstance(target._option_string_actions.get(f"--{key}"), argparse._StoreTrueAction):
            val = val.lower() in ("1", "true", "yes", "on")
        elif conv is not None:
            val = conv(val)
        for action in target._actions:
            if action.dest == key:
                if action.choices is not None and val not in action.choices:
                    raise ParseError(f"config {key}: {val!r} not one of {sorted(action.choices)}")
                action.required = False  # satisfied by the file
        target.set_defaults(**{key: val})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s", stream=sys.stderr)
        if args.seed is None:
            env = os.environ.get("MATINT_SEED")
            if env is not None:
                try:
                    args.seed = int(env)
                except ValueError:
                    raise ParseError(f"MATINT_SEED must be an integer, got {env!r}") from None
                log.warning("seed %d taken from MATINT_SEED", args.seed)
            else:
                args.seed = DEFAULT_SEED
        if args.trials < 1:
            raise ParseError("--trials must be at least 1")
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GuardError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
