"""Rooted flag products, the unlabeling operator and the 21x34 coefficient table.

The six 3-vertex flags X1..X6 (root = vertex 0) are

    X1  no edges              X4  path with the root at one end
    X2  single non-root edge  X5  cherry centred at the root
    X3  single root edge      X6  triangle

Columns of the table follow ``enumerate_classes(5)``; the reference column
order is recovered by :func:`align_to_reference`, never hard-coded.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path

from .smallgraph import (
    RootedFlag,
    SmallGraph,
    canonical_form,
    count_c5,
    enumerate_classes,
    rooted_canonical_code,
)

FLAG_EDGES = (
    (),
    ((1, 2),),
    ((0, 1),),
    ((0, 1), (1, 2)),
    ((0, 1), (0, 2)),
    ((0, 1), (0, 2), (1, 2)),
)
X = tuple(RootedFlag(SmallGraph.from_edges(3, e), 0) for e in FLAG_EDGES)

# rows of the table: unordered flag pairs (i, j), 1 <= i <= j <= 6
ROW_PAIRS = tuple((i, j) for i in range(1, 7) for j in range(i, 7))
SCALE = 30


class CertificateDataMismatch(ValueError):
    pass


class AlignmentAmbiguity(ValueError):
    pass


def data_dir() -> Path:
    env = os.environ.get("C5MIN_DATA")
    return Path(env) if env else Path(__file__).with_name("data")


def canonical_flag(f: RootedFlag) -> RootedFlag:
    """Representative with the root at vertex 0 and minimal edge mask."""
    return RootedFlag(SmallGraph(f.graph.n, rooted_canonical_code(f).code), 0)


def _sub_flag(f: RootedFlag, others: tuple[int, ...]) -> RootedFlag:
    g = f.graph
    verts = (f.root,) + others
    edges = [(a, b) for a, b in combinations(range(len(verts)), 2) if g.has_edge(verts[a], verts[b])]
    return RootedFlag(SmallGraph.from_edges(len(verts), edges), 0)


def _ordered_splits(f: RootedFlag, size1: int, size2: int):
    rest = [v for v in range(f.graph.n) if v != f.root]
    for first in combinations(rest, size1):
        remaining = [v for v in rest if v not in first]
        for second in combinations(remaining, size2):
            yield first, second


def flag_product_density(f1: RootedFlag, f2: RootedFlag, f: RootedFlag) -> Fraction:
    """p(f1, f2; f): probability that a random split of V(f) minus the root
    into sets of sizes |f1|-1 and |f2|-1 induces f1 and f2 (root kept)."""
    s1, s2 = f1.graph.n - 1, f2.graph.n - 1
    if s1 + s2 + 1 != f.graph.n:
        raise ValueError("flag sizes must satisfy |f1| + |f2| - 1 = |f|")
    c1, c2 = rooted_canonical_code(f1), rooted_canonical_code(f2)
    hits = total = 0
    for first, second in _ordered_splits(f, s1, s2):
        total += 1
        if (rooted_canonical_code(_sub_flag(f, first)) == c1
                and rooted_canonical_code(_sub_flag(f, second)) == c2):
            hits += 1
    return Fraction(hits, total)


@lru_cache(maxsize=None)
def rooted_classes(n: int) -> tuple[RootedFlag, ...]:
    """All rooted flags on n vertices up to root-preserving isomorphism."""
    seen = {}
    for g in enumerate_classes(n):
        for v in range(n):
            cf = canonical_flag(RootedFlag(g, v))
            seen.setdefault(cf.graph.edges, cf)
    return tuple(sorted(seen.values(), key=lambda f: (f.graph.edge_count, f.graph.edges)))


def flag_product(f1: RootedFlag, f2: RootedFlag) -> dict[RootedFlag, Fraction]:
    """Nonzero coefficients of f1 x f2 over canonical rooted flags."""
    if f1.graph.n != 3 or f2.graph.n != 3:
        raise ValueError("flag_product is defined here for 3-vertex flags")
    out = {}
    for f in rooted_classes(5):
        d = flag_product_density(f1, f2, f)
        if d:
            out[f] = d
    return out


def unlabel(f: RootedFlag) -> tuple[SmallGraph, Fraction]:
    g = f.graph
    target = rooted_canonical_code(f)
    hits = sum(rooted_canonical_code(RootedFlag(g, v)) == target for v in range(g.n))
    return canonical_form(g), Fraction(hits, g.n)


@dataclass(frozen=True)
class CoeffTable:
    rows: tuple[tuple[int, int], ...]
    classes: tuple[SmallGraph, ...]
    values: tuple[tuple[Fraction, ...], ...]

    def entry(self, i: int, j: int, col: int) -> Fraction:
        if i > j:
            i, j = j, i
        return self.values[self.rows.index((i, j))][col]

    def scaled(self, factor: int = SCALE) -> list[list[int]]:
        out = []
        for row in self.values:
            scaled = [v * factor for v in row]
            if any(s.denominator != 1 for s in scaled):
                raise ValueError(f"table entries are not multiples of 1/{factor}")
            out.append([int(s) for s in scaled])
        return out


@lru_cache(maxsize=None)
def product_table() -> CoeffTable:
    classes = enumerate_classes(5)
    col = {g.edges: c for c, g in enumerate(classes)}
    values = {pair: [Fraction(0)] * len(classes) for pair in ROW_PAIRS}
    for i, j in ROW_PAIRS:
        for f, p in flag_product(X[i - 1], X[j - 1]).items():
            g, q = unlabel(f)
            values[(i, j)][col[g.edges]] += p * q
    return CoeffTable(ROW_PAIRS, classes, tuple(tuple(values[p]) for p in ROW_PAIRS))


def cf_opt_vector() -> list[int]:
    return [count_c5(g.to_graph(), backend="naive") for g in enumerate_classes(5)]


def pk2_vector() -> list[Fraction]:
    return [Fraction(g.edge_count, 10) for g in enumerate_classes(5)]


@dataclass(frozen=True)
class Alignment:
    """``perm[c]`` is the 0-based reference column of internal column ``c``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("alignment is not a bijection")

    def to_reference(self, values):
        out = [None] * len(self.perm)
        for c, p in enumerate(self.perm):
            out[p] = values[c]
        return out

    def inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.perm)
        for c, p in enumerate(self.perm):
            inv[p] = c
        return tuple(inv)


def load_reference_table(path=None) -> tuple[list[int], list[int], list[list[int]]]:
    """Read (c_opt, 10*p(K2,F), 30*table rows) in reference column order."""
    path = Path(path) if path else data_dir() / "appendix_a.csv"
    with open(path, newline="") as fh:
        rows = [[int(x) for x in r] for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if len(rows) != 2 + len(ROW_PAIRS) or any(len(r) != 34 for r in rows):
        raise CertificateDataMismatch(f"{path}: expected 23 rows of 34 integers")
    return rows[0], rows[1], rows[2:]


def computed_columns() -> list[tuple[int, ...]]:
    table = product_table().scaled()
    copt = cf_opt_vector()
    pk2 = [int(v * 10) for v in pk2_vector()]
    return [(copt[c], pk2[c]) + tuple(r[c] for r in table) for c in range(len(copt))]


def align_to_reference(ref_table, ref_copt, ref_pk2x10) -> Alignment:
    ref_cols = [
        (ref_copt[c], ref_pk2x10[c]) + tuple(r[c] for r in ref_table)
        for c in range(len(ref_copt))
    ]
    ours = computed_columns()
    if len(ref_cols) != len(ours):
        raise CertificateDataMismatch(f"reference has {len(ref_cols)} columns, expected {len(ours)}")
    by_vec: dict[tuple, list[int]] = {}
    for p, vec in enumerate(ref_cols):
        by_vec.setdefault(vec, []).append(p)
    dups = [cols for cols in by_vec.values() if len(cols) > 1]
    if dups:
        names = "; ".join(", ".join(str(c + 1) for c in cols) for cols in dups)
        raise AlignmentAmbiguity(f"reference columns are not distinct: {names}")
    perm = []
    for c, vec in enumerate(ours):
        hit = by_vec.get(vec)
        if not hit:
            raise CertificateDataMismatch(_describe_miss(c, vec, ref_cols))
        perm.append(hit[0])
    if len(set(perm)) != len(perm):
        raise AlignmentAmbiguity("two computed columns map to the same reference column")
    return Alignment(tuple(perm))


def _row_label(r: int) -> str:
    if r == 0:
        return "c_opt"
    if r == 1:
        return "10*p(K2,F)"
    i, j = ROW_PAIRS[r - 2]
    return f"X{i}xX{j}"


def _describe_miss(c: int, vec, ref_cols) -> str:
    best = min(range(len(ref_cols)), key=lambda p: sum(a != b for a, b in zip(vec, ref_cols[p])))
    diffs = [
        f"row {_row_label(r)}: computed {a}, reference {b}"
        for r, (a, b) in enumerate(zip(vec, ref_cols[best])) if a != b
    ]
    return (f"computed column {c} ({enumerate_classes(5)[c]}) matches no reference column; "
            f"closest is reference column {best + 1}: " + "; ".join(diffs))


def reference_alignment() -> Alignment:
    copt, pk2, table = load_reference_table()
    return align_to_reference(table, copt, pk2)
