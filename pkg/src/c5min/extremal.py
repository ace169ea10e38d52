"""Turan and complete multipartite graphs with exact 5-cycle counts."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .smallgraph import Graph
from .symcert import lambda_fn

MAX_PATTERN_K = 12


def turan_sizes(k: int, n: int) -> list[int]:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    q, r = divmod(n, k)
    return [q + 1] * r + [q] * (k - r)


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    if not sizes or any(s <= 0 for s in sizes):
        raise ValueError("part sizes must be positive")
    n = sum(sizes)
    rows, start = [], 0
    full = (1 << n) - 1
    for s in sizes:
        part = ((1 << s) - 1) << start
        rows.extend([full & ~part] * s)
        start += s
    return Graph(n, rows)


def turan_graph(k: int, n: int) -> Graph:
    return complete_multipartite(turan_sizes(k, n))


def _falling(a: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= a - i
    return out


def _c5_by_patterns(sizes: Sequence[int]) -> int:
    total = 0
    for pattern in product(range(len(sizes)), repeat=5):
        if any(pattern[i] == pattern[(i + 1) % 5] for i in range(5)):
            continue
        term = 1
        for part in set(pattern):
            term *= _falling(sizes[part], pattern.count(part))
        total += term
    assert total % 10 == 0
    return total // 10


def _c5_grouped(sizes: Sequence[int]) -> int:
    """Same count grouped by how many distinct parts the cycle visits.

    5 parts: 5! ordered choices of distinct parts.  4 parts: one part twice at
    one of the 5 non-adjacent position pairs, the other three ordered.  3 parts:
    one singleton position (5 ways) and two parts alternating on the rest.
    """
    a = list(sizes)
    k = len(a)
    f2 = [_falling(x, 2) for x in a]
    e = [1, 0, 0, 0, 0, 0]  # elementary symmetric polynomials e0..e5
    for x in a:
        for d in range(5, 0, -1):
            e[d] += e[d - 1] * x
    five = 120 * e[5]
    four = 0
    for p in range(k):
        # e3 of the sizes with part p removed
        e1 = e[1] - a[p]
        e2 = e[2] - a[p] * e1
        e3 = e[3] - a[p] * e2
        four += f2[p] * 6 * e3
    four *= 5
    three = 0
    s = sum(a)
    for x in range(k):
        for y in range(k):
            if x != y:
                three += f2[x] * f2[y] * (s - a[x] - a[y])
    three *= 5
    total = five + four + three
    assert total % 10 == 0
    return total // 10


def c5_multipartite_closed(sizes: Sequence[int]) -> int:
    if not sizes or any(s <= 0 for s in sizes):
        raise ValueError("part sizes must be positive")
    if len(sizes) <= MAX_PATTERN_K:
        return _c5_by_patterns(sizes)
    return _c5_grouped(sizes)


def turan_density_report(k: int, n: int) -> dict:
    if k < 3:
        raise ValueError("turan_density_report is for k >= 3")
    count = c5_multipartite_closed(turan_sizes(k, n))
    density = Fraction(count, n**5)
    lam = lambda_fn()(k)
    gap = density - lam
    return {
        "k": k,
        "n": n,
        "count": count,
        "density": density,
        "lambda": lam,
        "gap": gap,
        "relative_gap": gap / lam,
    }
