"""Upper-bound construction for general edge density and its optimisation.

For 1 - 1/k <= p <= 1 - 1/(k+1) the construction has k-1 independent sets of
relative size x, complete to each other and to a set Y of relative size
y = 1 - (k-1)x, where G[Y] is almost (y n rho)-regular and C5-free.  Its edge
density tends to g(x, y, rho) and its C5 density (copies / n^5) to
f(x, y, rho).  ``fmin`` minimises f over the constraint set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .smallgraph import Graph, count_c5
from .symcert import lambda_fn

HALF = Fraction(1, 2)


def falling(a, j: int):
    out = 1
    for i in range(j):
        out = out * (a - i)
    return out


def _f_coeffs(k: int) -> tuple[Fraction, ...]:
    m = k - 1
    h = HALF
    return (
        Fraction(1, 10) * falling(m, 5) + h * falling(m, 4) + h * falling(m, 3),
        h * falling(m, 4) + Fraction(3, 2) * falling(m, 3) + h * falling(m, 2),
        Fraction(falling(m, 3)), Fraction(falling(m, 2)), Fraction(m),
    )


def _is_exact(*vals) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in vals)


def f_value(k: int, x, y, rho):
    """C5 density of the construction.

    Exact for Fraction (or symbolic) inputs; float and numpy array inputs are
    evaluated in float64.
    """
    c5, c4, f3, f2, m = _f_coeffs(k)
    h = HALF
    if any(isinstance(v, (float, np.floating, np.ndarray)) for v in (x, y, rho)):
        c5, c4, f3, f2, m, h = map(float, (c5, c4, f3, f2, m, h))
    return (
        c5 * x**5
        + c4 * x**4 * y
        + ((h + h * rho) * f3 + (1 + h * rho) * f2) * x**3 * y**2
        + ((h * rho + h * rho**2) * f2 + h * rho * m) * x**2 * y**3
        + h * rho**3 * m * x * y**4
    )


def g_value(k: int, x, y, rho):
    m = k - 1
    return falling(m, 2) * x**2 + 2 * m * x * y + rho * y**2


class DegenerateError(ValueError):
    pass


class Rho(NamedTuple):
    rho: float | Fraction
    status: str  # "interior", "boundary" (rho in {0, 1/2}) or "infeasible"

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


CONVENTIONS = ("A", "B", "printed")


def rho_from(k: int, p, x, convention: str = "A", tol: float = 1e-12) -> Rho:
    """Solve the edge-density equation for rho given x, with y = 1 - (k-1)x.

    ``A`` solves g = p.  ``B`` drops the (k-1)_2 x^2 term and ``printed`` uses
    a unit x^2 coefficient; both exist only to compare against the closed
    form in :func:`k2_reduced`.
    """
    y = 1 - (k - 1) * x
    if y <= tol:
        raise DegenerateError(f"y = 1 - (k-1)x = {y} leaves no room for the set Y")
    if convention == "A":
        xx = falling(k - 1, 2) * x**2
    elif convention == "B":
        xx = 0
    elif convention == "printed":
        xx = x**2
    else:
        raise ValueError(f"unknown convention {convention!r}")
    rho = (p - xx - 2 * (k - 1) * x * y) / y**2
    if 0 < rho < HALF:
        status = "interior"
    elif rho == 0 or rho == HALF:
        status = "boundary"
    else:
        status = "infeasible"
    return Rho(rho, status)


def k2_reduced(x, p):
    """The closed form of f(2, x, 1 - x, rho(x)) for k = 2."""
    if x == 1:
        raise ValueError("k2_reduced is undefined at x = 1")
    return (x * (2 * x**2 - 2 * x + p)
            * (3 * x**4 - 5 * x**3 + (1 + 4 * p) * x**2 + (1 - 4 * p) * x + p**2)
            / (2 * (x - 1) ** 2))


def convention_report(points: Iterable[tuple]) -> dict:
    """Which rho convention reproduces the k = 2 closed form at each (x, p)."""
    rows = []
    for x, p in points:
        x, p = Fraction(x), Fraction(p)
        target = k2_reduced(x, p)
        row = {"x": str(x), "p": str(p), "display": str(target)}
        for conv in CONVENTIONS:
            rho = rho_from(2, p, x, convention=conv).rho
            row[conv] = f_value(2, x, 1 - x, rho) == target
        rows.append(row)
    matches = [c for c in CONVENTIONS if all(r[c] for r in rows)]
    return {"points": rows, "matching": matches}


def lam(k: int) -> Fraction:
    return lambda_fn()(k)


@dataclass(frozen=True)
class PPoint:
    x: float | Fraction
    y: float | Fraction
    rho: float | Fraction


@dataclass(frozen=True)
class Solution:
    k: int
    p: float | Fraction
    point: PPoint | None
    value: float | Fraction | None
    status: str  # "optimal-grid", "boundary" or "infeasible"


def _as_number(p):
    if isinstance(p, str):
        return Fraction(p)
    return p


def _sqrt_exact(d: Fraction):
    n, m = d.numerator, d.denominator
    rn, rm = math.isqrt(n), math.isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return math.sqrt(d)


def _quad_roots(a, b, c, eps: float = 1e-12) -> list:
    """Real roots of a x^2 + b x + c (a > 0), exact when possible."""
    disc = b * b - 4 * a * c
    exact = all(isinstance(v, (int, Fraction)) for v in (a, b, c))
    if exact:
        disc = Fraction(disc)
        if disc < 0:
            return []
        if disc == 0:
            return [Fraction(-b, 1) / (2 * a)]
        r = _sqrt_exact(disc)
    else:
        scale = max(abs(b * b), abs(4 * a * c), 1.0)
        if disc < -eps * scale:
            return []
        if abs(disc) <= eps * scale:
            return [-b / (2 * a)]
        r = math.sqrt(disc)
    return sorted([(-b - r) / (2 * a), (-b + r) / (2 * a)])


def feasible_set(k: int, p) -> tuple[list[tuple], list]:
    """Intervals of x where the constraints of (P) hold, plus isolated points
    where rho = 0 is attained by tangency.

    With y = 1 - (k-1)x, rho * y^2 = q0(x) = p - 2(k-1)x + k(k-1)x^2 and
    (rho - 1/2) y^2 = q1(x) = (p - 1/2) - (k-1)x + (k(k-1) - (k-1)^2/2) x^2.
    Feasibility is q0 >= 0, q1 <= 0 and 0 <= x < 1/(k-1).
    """
    m = k - 1
    hi = Fraction(1, m)
    r1 = _quad_roots(k * m, -2 * m, p)
    r2 = _quad_roots(k * m - Fraction(m * m, 2), -m, p - HALF)
    if not r2:
        return [], []
    lo_q1, hi_q1 = r2[0], r2[-1]
    base = (max(lo_q1, 0), min(hi_q1, hi))
    if base[0] > base[1] or base[0] >= hi:
        return [], []
    pieces = [base]
    touch = []
    if len(r1) == 2:
        s1, s2 = r1
        cut = []
        for a, b in pieces:
            if s1 > a:
                cut.append((a, min(b, s1)))
            if s2 < b:
                cut.append((max(a, s2), b))
        pieces = [(a, b) for a, b in cut if a <= b]
    elif len(r1) == 1:
        t = r1[0]
        if base[0] <= t <= base[1]:
            touch.append(t)
    pieces = [(a, b) for a, b in pieces if a < hi]
    return pieces, touch


def golden_section(fn: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    inv = (math.sqrt(5) - 1) / 2
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fn(d)
    return (a + b) / 2


def _objective(k: int, p):
    m = k - 1
    pf = float(p)

    def phi(x):
        y = 1 - m * x
        rho = (pf - m * (m - 1) * x * x - 2 * m * x * y) / (y * y)
        return f_value(k, x, y, rho)

    return phi


def _point(k: int, p, x) -> PPoint:
    y = 1 - (k - 1) * x
    return PPoint(x, y, rho_from(k, p, x).rho)


def check_regime(k: int, p, slack: float = 1e-12) -> None:
    """Closed regime check; float p may overshoot an endpoint by ``slack``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    lo, hi = 1 - Fraction(1, k), 1 - Fraction(1, k + 1)
    if _is_exact(p):
        ok = lo <= p <= hi
    else:
        ok = float(lo) - slack <= p <= float(hi) + slack
    if not ok:
        raise ValueError(f"p = {p} is outside [1 - 1/{k}, 1 - 1/{k + 1}]")


def fmin(k: int, p, tol: float = 1e-12, grid: int = 10_000) -> Solution:
    """Global minimum of f over the feasible set of (P) for fixed k and p.

    A dense grid locates every basin, golden-section search refines each one,
    and interval endpoints and tangency points are evaluated exactly when p
    is rational.  Candidates within 1e-13 of the best value prefer the exact
    boundary point.
    """
    p = _as_number(p)
    check_regime(k, p)
    pieces, touch = feasible_set(k, p)
    if not pieces and not touch:
        return Solution(k, p, None, None, "infeasible")
    phi = _objective(k, p)
    candidates = []  # (value, x, status)
    for t in touch:
        candidates.append((f_value(k, t, 1 - (k - 1) * t, rho_from(k, p, t).rho), t, "boundary"))
    for a, b in pieces:
        for e in {a, b}:
            if 1 - (k - 1) * e > 1e-12:
                candidates.append((f_value(k, e, 1 - (k - 1) * e, rho_from(k, p, e).rho), e, "boundary"))
    total = sum(float(b - a) for a, b in pieces) or 1.0
    for a, b in pieces:
        af, bf = float(a), float(b)
        if bf - af <= 0:
            continue
        npts = max(5, int(grid * (bf - af) / total))
        xs = np.linspace(af, bf, npts)
        vals = phi(xs)
        for i in range(1, npts - 1):
            if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
                xr = golden_section(phi, xs[i - 1], xs[i + 1], tol)
                candidates.append((float(phi(xr)), float(xr), "optimal-grid"))
    best = min(float(c[0]) for c in candidates)
    slack = 1e-13 * max(1.0, abs(best))
    # exact candidates (boundary points) come first and win ties
    for value, x, status in candidates:
        if float(value) <= best + slack:
            return Solution(k, p, _point(k, p, x), value, status)
    raise AssertionError("unreachable")


def regime_of(p) -> int:
    p = Fraction(p)
    if not 0 <= p < 1:
        raise ValueError("p must lie in [0, 1)")
    return math.floor(1 / (1 - p))


def secant_L(p):
    """Piecewise-linear interpolant through the points (1 - 1/k, lambda(k))."""
    exact = isinstance(p, (int, Fraction, str))
    pe = Fraction(p)
    k = regime_of(pe)
    p0, p1 = 1 - Fraction(1, k), 1 - Fraction(1, k + 1)
    l0, l1 = lam(k), lam(k + 1)
    value = l0 + (pe - p0) * (l1 - l0) / (p1 - p0)
    return value if exact else float(value)


def knots_between(start, stop) -> list[Fraction]:
    out = []
    k = 1
    while True:
        q = 1 - Fraction(1, k)
        if q > stop:
            return out
        if q >= start:
            out.append(q)
        k += 1


def fmin_curve(start="0.5", stop="0.875", step="0.005", include_knots: bool = True,
               tol: float = 1e-12, grid: int = 10_000, map_fn=map) -> list[tuple]:
    """Rows (p, fmin, L, fmin - L) over a rational grid, knots optionally added."""
    start, stop, step = Fraction(start), Fraction(stop), Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    ps = []
    p = start
    while p <= stop:
        ps.append(p)
        p += step
    if include_knots:
        ps = sorted(set(ps) | set(knots_between(start, stop)))
    return list(map_fn(_curve_row, [(p, tol, grid) for p in ps]))


def _curve_row(args):
    p, tol, grid = args
    sol = fmin(regime_of(p), p, tol=tol, grid=grid)
    L = secant_L(p)
    return (p, sol.value, L, sol.value - L)


def curve_monotone(rows) -> bool:
    """fmin nondecreasing within each regime along the given rows."""
    prev = {}
    ok = True
    for p, value, _, _ in rows:
        k = regime_of(p)
        if k in prev and float(value) < float(prev[k]) - 1e-12:
            ok = False
        prev[k] = value
    return ok


# -- finite construction ----------------------------------------------------


@dataclass(frozen=True)
class Layout:
    part_size: int
    parts: int
    y_lo: int
    y_mid: int
    n: int

    @property
    def y_size(self) -> int:
        return self.n - self.y_lo


def layout(k: int, n: int, x) -> Layout:
    a = math.floor(x * n)
    if a < 0 or (k - 1) * a > n:
        raise ValueError(f"x = {x} does not fit {k - 1} parts into n = {n}")
    y_lo = (k - 1) * a
    return Layout(a, k - 1, y_lo, y_lo + (n - y_lo) // 2, n)


def build_construction(k: int, n: int, x, rho, seed: int = 0, model: str = "bernoulli") -> Graph:
    """Finite instance of the construction.

    ``bernoulli``: G[Y] joins the two halves of Y independently with
    probability 2 rho.  ``regular``: a random circulant bipartite graph in
    which every vertex has the same number round(2 rho |Y|/2) of Y-neighbours.
    Uniforms come from numpy's PCG64 seeded with ``seed`` in row-major order,
    so output is reproducible across platforms.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if not 0 <= rho <= HALF:
        raise ValueError(f"rho = {rho} outside [0, 1/2]")
    lay = layout(k, n, x)
    adj = np.zeros((n, n), dtype=bool)
    a = lay.part_size
    for i in range(lay.parts):
        lo = i * a
        adj[lo:lo + a, :] = True
        adj[lo:lo + a, lo:lo + a] = False
    adj[:, : lay.y_lo] |= adj[: lay.y_lo, :].T
    h1 = lay.y_mid - lay.y_lo
    h2 = n - lay.y_mid
    rng = np.random.Generator(np.random.PCG64(seed))
    if model == "bernoulli":
        block = rng.random((h1, h2)) < 2 * float(rho)
    elif model == "regular":
        block = _circulant_block(h1, h2, 2 * float(rho), rng)
    else:
        raise ValueError(f"unknown model {model!r}")
    adj[lay.y_lo:lay.y_mid, lay.y_mid:] = block
    adj[lay.y_mid:, lay.y_lo:lay.y_mid] = block.T
    np.fill_diagonal(adj, False)
    return Graph.from_adjacency(adj)


def _circulant_block(h1: int, h2: int, prob: float, rng) -> np.ndarray:
    if h1 == 0 or h2 == 0:
        return np.zeros((h1, h2), dtype=bool)
    d = int(round(prob * h2))
    shifts = rng.permutation(h2)[:d]
    block = np.zeros((h1, h2), dtype=bool)
    rows = np.arange(h1)[:, None]
    block[rows, (rows + shifts[None, :]) % h2] = True
    return block[rng.permutation(h1)][:, rng.permutation(h2)]


def y_degree_concentration(G: Graph, k: int, x, rho, rel: float = 0.10) -> float:
    """Fraction of Y-vertices whose degree inside Y is within ``rel`` of |Y| rho."""
    lay = layout(k, G.n, x)
    target = lay.y_size * float(rho)
    adj = G.adjacency()
    deg = adj[lay.y_lo:, lay.y_lo:].sum(axis=1)
    if len(deg) == 0:
        return 1.0
    return float(np.mean(np.abs(deg - target) <= rel * target))


def construction_report(k: int, n: int, x, rho, seed: int = 0, model: str = "bernoulli") -> dict:
    G = build_construction(k, n, x, rho, seed=seed, model=model)
    y = 1 - (k - 1) * x
    count = count_c5(G)
    edge_density = G.edge_count / math.comb(n, 2)
    return {
        "k": k, "n": n, "x": float(x), "rho": float(rho), "seed": seed, "model": model,
        "edge_density": edge_density,
        "g": float(g_value(k, x, y, rho)),
        "c5_count": count,
        "c5_density": count / n**5,
        "f": float(f_value(k, x, y, rho)),
        "y_degree_within_10pct": y_degree_concentration(G, k, x, rho),
    }
