"""Small graphs (at most 8 vertices), canonical codes, subgraph counting and graph6.

A ``SmallGraph`` stores its edges as a bitmask over the unordered pairs
``(i, j)``, ``i < j``, taken in lexicographic order, so pair ``(0, 1)`` is
bit 0, ``(0, 2)`` is bit 1, and so on.  Canonical codes are the minimum such
bitmask over all vertex relabelings; at these sizes brute force over every
permutation is cheap once vectorised with numpy.

``Graph`` is the general-purpose type (thousands of vertices) with adjacency
rows held as Python integer bitsets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

MAX_SMALL = 8
MAX_ENUM = 7


class SizeError(ValueError):
    """Raised when a graph is too large for the requested operation."""


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def _pair_index(n: int) -> np.ndarray:
    idx = -np.ones((n, n), dtype=np.int64)
    for p, (i, j) in enumerate(pairs(n)):
        idx[i, j] = idx[j, i] = p
    return idx


def pair_index(i: int, j: int, n: int) -> int:
    if i == j:
        raise ValueError("no self-loops")
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True, order=True)
class CanonicalCode:
    n: int
    code: int


@dataclass(frozen=True)
class SmallGraph:
    n: int
    edges: int = 0

    def __post_init__(self):
        if not 0 <= self.n <= MAX_SMALL:
            raise SizeError(f"SmallGraph supports 0..{MAX_SMALL} vertices, got {self.n}")
        if self.edges < 0 or self.edges >> comb(self.n, 2):
            raise ValueError("edge bitmask has bits beyond C(n, 2)")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SmallGraph":
        mask = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            mask |= 1 << pair_index(u, v, n)
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "SmallGraph":
        return cls(n, (1 << comb(n, 2)) - 1)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.edges >> pair_index(u, v, self.n) & 1)

    def edge_list(self) -> list[tuple[int, int]]:
        return [pq for b, pq in enumerate(pairs(self.n)) if self.edges >> b & 1]

    @property
    def edge_count(self) -> int:
        return bin(self.edges).count("1")

    def degree(self, v: int) -> int:
        return sum(self.has_edge(v, u) for u in range(self.n) if u != v)

    def permute(self, perm: Sequence[int]) -> "SmallGraph":
        """Relabel vertex ``v`` as ``perm[v]``."""
        return SmallGraph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edge_list()))

    def to_graph(self) -> "Graph":
        return Graph.from_edges(self.n, self.edge_list())

    def __repr__(self):
        return f"SmallGraph(n={self.n}, edges={self.edge_list()})"


@dataclass(frozen=True)
class RootedFlag:
    graph: SmallGraph
    root: int

    def __post_init__(self):
        if not 0 <= self.root < self.graph.n:
            raise ValueError(f"root {self.root} not a vertex of a {self.graph.n}-vertex graph")


# -- permutation tables -----------------------------------------------------


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of range(n) and, per permutation, 2**(image pair index)."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    idx = _pair_index(n)
    plist = pairs(n)
    if not plist:
        return perms, np.zeros((len(perms), 0))
    src_i = np.array([i for i, _ in plist])
    src_j = np.array([j for _, j in plist])
    target = idx[perms[:, src_i], perms[:, src_j]]
    # float64 keeps the matmul on BLAS; codes stay below 2**28 so it is exact
    return perms, np.ldexp(1.0, target)


def _mask_bits(masks: np.ndarray, npairs: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(npairs)) & 1).astype(np.float64)


def _min_codes(masks: np.ndarray, n: int, rows: np.ndarray | None = None, chunk: int = 1000) -> np.ndarray:
    _, weights = _perm_tables(n)
    if rows is not None:
        weights = weights[rows]
    npairs = comb(n, 2)
    if npairs == 0:
        return np.zeros(len(masks), dtype=np.int64)
    out = np.empty(len(masks), dtype=np.int64)
    for s in range(0, len(masks), chunk):
        bits = _mask_bits(masks[s:s + chunk], npairs)
        out[s:s + chunk] = (bits @ weights.T).min(axis=1).astype(np.int64)
    return out


def canonical_code(g: SmallGraph) -> CanonicalCode:
    if g.n > MAX_SMALL:
        raise SizeError(f"canonical_code supports n <= {MAX_SMALL}")
    code = int(_min_codes(np.array([g.edges], dtype=np.int64), g.n)[0])
    return CanonicalCode(g.n, code)


def canonical_form(g: SmallGraph) -> SmallGraph:
    return SmallGraph(g.n, canonical_code(g).code)


def rooted_canonical_code(f: RootedFlag) -> CanonicalCode:
    """Minimum bitmask over relabelings that send the root to vertex 0."""
    n = f.graph.n
    perms, _ = _perm_tables(n)
    rows = np.flatnonzero(perms[:, f.root] == 0)
    code = int(_min_codes(np.array([f.graph.edges], dtype=np.int64), n, rows)[0])
    return CanonicalCode(n, code)


def is_isomorphic(a: SmallGraph, b: SmallGraph) -> bool:
    return a.n == b.n and a.edge_count == b.edge_count and canonical_code(a) == canonical_code(b)


def automorphism_count(g: SmallGraph) -> int:
    _, weights = _perm_tables(g.n)
    if g.n < 2:
        return 1
    images = _mask_bits(np.array([g.edges], dtype=np.int64), comb(g.n, 2)) @ weights.T
    return int((images[0] == g.edges).sum())


@lru_cache(maxsize=None)
def enumerate_classes(n: int) -> tuple[SmallGraph, ...]:
    """One canonical representative per isomorphism class on ``n`` vertices.

    Built by extending every class on ``n - 1`` vertices with a new vertex
    joined to each possible neighbourhood, then deduplicating by canonical
    code.  Sorted by (edge count, canonical code).
    """
    if n > MAX_ENUM:
        raise SizeError(f"enumerate_classes supports n <= {MAX_ENUM}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= 1:
        return (SmallGraph(n, 0),)
    last = [1 << pair_index(i, n - 1, n) for i in range(n - 1)]
    candidates = []
    for h in enumerate_classes(n - 1):
        # re-index the (n-1)-vertex mask into the n-vertex pair order
        base = 0
        for i, j in h.edge_list():
            base |= 1 << pair_index(i, j, n)
        for subset in range(1 << (n - 1)):
            m = base
            for i in range(n - 1):
                if subset >> i & 1:
                    m |= last[i]
            candidates.append(m)
    codes = np.unique(_min_codes(np.array(candidates, dtype=np.int64), n))
    reps = [SmallGraph(n, int(c)) for c in codes]
    reps.sort(key=lambda g: (g.edge_count, g.edges))
    return tuple(reps)


@lru_cache(maxsize=None)
def class_lookup(s: int) -> np.ndarray:
    """Map every s-vertex edge mask to its index in ``enumerate_classes(s)``."""
    classes = enumerate_classes(s)
    where = {g.edges: i for i, g in enumerate(classes)}
    codes = _min_codes(np.arange(1 << comb(s, 2), dtype=np.int64), s)
    return np.array([where[int(c)] for c in codes], dtype=np.int64)


def class_index(g: SmallGraph) -> int:
    return int(class_lookup(g.n)[g.edges])


# -- general graphs ---------------------------------------------------------


class Graph:
    """Undirected simple graph with adjacency rows stored as integer bitsets."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[int] | None = None):
        self.n = n
        self.rows = tuple(rows) if rows is not None else (0,) * n
        if len(self.rows) != n:
            raise ValueError("need one adjacency row per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        if adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if (adj != adj.T).any() or adj.diagonal().any():
            raise ValueError("adjacency matrix must be symmetric with empty diagonal")
        rows = []
        for r in adj:
            packed = np.packbits(r, bitorder="little").tobytes()
            rows.append(int.from_bytes(packed, "little"))
        return cls(len(adj), rows)

    def adjacency(self) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        out = np.zeros((self.n, self.n), dtype=np.uint8)
        for v, r in enumerate(self.rows):
            bits = np.unpackbits(np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little")
            out[v] = bits[: self.n]
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        r, out = self.rows[v], []
        while r:
            low = r & -r
            out.append(low.bit_length() - 1)
            r ^= low
        return out

    def degree(self, v: int) -> int:
        return bin(self.rows[v]).count("1")

    def degrees(self) -> list[int]:
        return [bin(r).count("1") for r in self.rows]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.neighbors(u) if u < v]

    def induced(self, vertices: Sequence[int]) -> SmallGraph:
        s = len(vertices)
        mask = 0
        for b, (i, j) in enumerate(pairs(s)):
            if self.rows[vertices[i]] >> vertices[j] & 1:
                mask |= 1 << b
        return SmallGraph(s, mask)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"


def _as_graph(g) -> Graph:
    return g.to_graph() if isinstance(g, SmallGraph) else g


def _subset_masks(G: Graph, s: int, chunk: int = 200_000):
    """Yield arrays of pair-order edge masks of all s-subsets of V(G)."""
    adj = G.adjacency().astype(np.int64)
    plist = pairs(s)
    it = itertools.combinations(range(G.n), s)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, chunk)), dtype=np.int64)
        if block.size == 0:
            return
        c = block.reshape(-1, s)
        mask = np.zeros(len(c), dtype=np.int64)
        for b, (i, j) in enumerate(plist):
            mask |= adj[c[:, i], c[:, j]] << b
        yield mask


def induced_census(G: Graph, s: int) -> np.ndarray:
    """P(F, G) for every F in ``enumerate_classes(s)`` (induced copy counts)."""
    G = _as_graph(G)
    lookup = class_lookup(s)
    counts = np.zeros(len(enumerate_classes(s)), dtype=np.int64)
    if s > G.n:
        return counts
    for mask in _subset_masks(G, s):
        counts += np.bincount(lookup[mask], minlength=len(counts))
    return counts


def count_induced(F: SmallGraph, G: Graph) -> int:
    G = _as_graph(G)
    if F.n > G.n:
        return 0
    if F.n <= MAX_ENUM:
        return int(induced_census(G, F.n)[class_index(F)])
    target = canonical_code(F)
    return sum(
        1 for vs in itertools.combinations(range(G.n), F.n)
        if canonical_code(G.induced(vs)) == target
    )


def p_induced(F: SmallGraph, G: Graph) -> Fraction:
    G = _as_graph(G)
    if F.n > G.n:
        return Fraction(0)
    return Fraction(count_induced(F, G), comb(G.n, F.n))


def nu_copies(H: SmallGraph, G: Graph) -> int:
    """Number of (not necessarily induced) subgraphs of G isomorphic to H."""
    G = _as_graph(G)
    if H.n > 5:
        raise SizeError("nu_copies supports |H| <= 5")
    if H.n > G.n:
        return 0
    hadj = [[u for u in range(H.n) if u != v and H.has_edge(u, v)] for v in range(H.n)]
    full = (1 << G.n) - 1

    def extend(i: int, image: list[int], used: int) -> int:
        if i == H.n:
            return 1
        cand = full & ~used
        for u in hadj[i]:
            if u < i:
                cand &= G.rows[image[u]]
        total = 0
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            image.append(v)
            total += extend(i + 1, image, used | low)
            image.pop()
            cand ^= low
        return total

    return extend(0, [], 0) // automorphism_count(H)


@lru_cache(maxsize=None)
def _c5_per_mask() -> np.ndarray:
    """Number of 5-cycles contained in each 5-vertex edge mask."""
    cycles = []
    for rest in itertools.permutations(range(1, 5)):
        if rest[0] < rest[-1]:
            order = (0,) + rest
            cycles.append(sum(1 << pair_index(order[t], order[(t + 1) % 5], 5) for t in range(5)))
    assert len(cycles) == 12
    return np.array([sum((m & c) == c for c in cycles) for m in range(1 << 10)], dtype=np.int64)


def count_c5_naive(G: Graph) -> int:
    G = _as_graph(G)
    table = _c5_per_mask()
    return int(sum(table[m].sum() for m in _subset_masks(G, 5)))


def count_c5_algebraic(G: Graph) -> int:
    """5-cycle count from closed walks: (tr A^5 - 5 tr A^3 - 5 sum_i (d_i - 2) A^3_ii) / 10."""
    G = _as_graph(G)
    if G.n < 5:
        return 0
    a = G.adjacency().astype(np.float64)
    a2 = a @ a
    a3 = a2 @ a  # entries <= n**2, exact in float64 for n up to ~10**7
    a2i = a2.astype(np.int64)
    a3i = a3.astype(np.int64)
    tr5 = sum(int(x) for x in (a2i * a3i.T).sum(axis=1))
    diag3 = a3i.diagonal()
    tr3 = int(diag3.sum())
    deg = a.sum(axis=1).astype(np.int64)
    corr = sum(int(x) for x in (deg - 2) * diag3)
    total = tr5 - 5 * tr3 - 5 * corr
    assert total % 10 == 0
    return total // 10


def count_c5(G: Graph, backend: str = "auto") -> int:
    G = _as_graph(G)
    if backend == "auto":
        backend = "naive" if G.n <= 12 else "algebraic"
    if backend == "naive":
        return count_c5_naive(G)
    if backend == "algebraic":
        return count_c5_algebraic(G)
    raise ValueError(f"unknown backend {backend!r}")


def rooted_flag_index(G: Graph, r: int, u: int, v: int) -> int:
    """Type 1..6 of the triple {r, u, v} rooted at r.

    1 empty, 2 edge uv only, 3 one root edge only, 4 path with the root as an
    end, 5 cherry centred at the root, 6 triangle.
    """
    if len({r, u, v}) != 3:
        raise ValueError("rooted_flag_index needs three distinct vertices")
    G = _as_graph(G)
    ru, rv, uv = G.has_edge(r, u), G.has_edge(r, v), G.has_edge(u, v)
    if ru and rv:
        return 6 if uv else 5
    if ru or rv:
        return 4 if uv else 3
    return 2 if uv else 1


# -- graph6 -----------------------------------------------------------------


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 1 << 36:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise SizeError("graph too large for graph6")


def write_graph6(G) -> str:
    G = _as_graph(G)
    out = bytearray(_encode_n(G.n))
    acc = nbits = 0
    for j in range(1, G.n):
        row = G.rows[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = s.encode("ascii", errors="replace")
    for off, byte in enumerate(data):
        if not 63 <= byte <= 126:
            raise Graph6Error(f"invalid graph6 byte {byte!r}", off)
    if not data:
        raise Graph6Error("empty graph6 string", 0)
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise Graph6Error("truncated 8-byte size header", len(data))
        n, pos = 0, 8
        for b in data[2:8]:
            n = n << 6 | (b - 63)
    else:
        if len(data) < 4:
            raise Graph6Error("truncated 4-byte size header", len(data))
        n, pos = 0, 4
        for b in data[1:4]:
            n = n << 6 | (b - 63)
    need = (comb(n, 2) + 5) // 6
    if len(data) - pos != need:
        raise Graph6Error(f"expected {need} data bytes for n={n}, found {len(data) - pos}", min(len(data), pos + need))
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            b = data[pos + k // 6] - 63
            if b >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if k % 6:
        if (data[-1] - 63) & ((1 << (6 - k % 6)) - 1):
            raise Graph6Error("nonzero padding bits", len(data) - 1)
    return Graph(n, rows)


def read_graph6_file(path) -> list[Graph]:
    with open(path) as fh:
        return [parse_graph6(line) for line in fh if line.strip()]
