"""Plain-text instance formats. All element and vertex indices are 1-based.

- CNF: DIMACS (`c` comments, `p cnf <vars> <clauses>`, clauses ended by 0)
- 3-DM: first line `m`, then one `a b c` triplet per line
- digraph: first line `n`, then one `u v` arc per line
- ES family: one k-subset per line as space-separated elements, `-` for the empty set

Blank lines and lines starting with `#` are ignored in the last three.
"""

from __future__ import annotations

from pathlib import Path

from .gadgets import CNFInstance, Digraph, ESInstance, ThreeDMInstance


class ParseError(ValueError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _ints(line: str, no: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"line {no}: expected integers, got {line!r}") from None


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def parse_dimacs(text: str) -> CNFInstance:
    nvars = nclauses = None
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {no}: bad problem line {line!r}")
            nvars, nclauses = _ints(" ".join(parts[2:]), no)
            continue
        if nvars is None:
            raise ParseError(f"line {no}: clause before problem line")
        for lit in _ints(line, no):
            if lit == 0:
                if not cur:
                    raise ParseError(f"line {no}: empty clause")
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if nvars is None:
        raise ParseError("missing problem line")
    if cur:
        clauses.append(tuple(cur))
    if len(clauses) != nclauses:
        raise ParseError(f"header declares {nclauses} clauses, found {len(clauses)}")
    try:
        return CNFInstance(nvars, clauses)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _header_and_rows(text: str, width: int, what: str):
    it = _lines(text)
    try:
        no, head = next(it)
    except StopIteration:
        raise ParseError(f"empty {what} file") from None
    h = _ints(head, no)
    if len(h) != 1 or h[0] < 1:
        raise ParseError(f"line {no}: expected a positive size header")
    rows = []
    for no, line in it:
        vals = _ints(line, no)
        if len(vals) != width:
            raise ParseError(f"line {no}: expected {width} integers")
        rows.append(tuple(vals))
    return h[0], rows


def parse_3dm(text: str) -> ThreeDMInstance:
    m, rows = _header_and_rows(text, 3, "3-DM")
    if not rows:
        raise ParseError("no triplets")
    try:
        return ThreeDMInstance(m, rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_digraph(text: str) -> Digraph:
    n, rows = _header_and_rows(text, 2, "digraph")
    try:
        return Digraph(n, rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_family(text: str, n: int, k: int) -> list[tuple[int, ...]]:
    fam = []
    for no, line in _lines(text):
        s = () if line == "-" else tuple(_ints(line, no))
        if len(set(s)) != len(s) or len(s) != k or any(not 1 <= e <= n for e in s):
            raise ParseError(f"line {no}: not a {k}-subset of [{n}]: {line!r}")
        fam.append(s)
    return fam


def es_from_family_text(text: str, n: int, k: int) -> ESInstance:
    return ESInstance.from_family(n, k, parse_family(text, n, k))


def format_family(sets) -> str:
    return "".join((" ".join(map(str, s)) if s else "-") + "\n" for s in sets)
