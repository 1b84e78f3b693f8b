"""Immutable simple graphs on vertices ``0..n-1`` with bitset adjacency.

A :class:`Graph` stores one Python int per vertex; bit ``u`` of ``adj[v]`` is
set iff ``uv`` is an edge.  Vertex sets are exchanged as ``frozenset[int]``
at the public surface and as int masks internally.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .bitset import as_fraction, iter_bits, lowest, mask_of, members
from .errors import CapabilityError, Graph6Error

VertexSet = frozenset

GRAPH6_MAX_N = 62
GRAPH6_HEADER = ">>graph6<<"
BLOWUP_SIZE_CAP = 100_000


@dataclass(frozen=True, slots=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(self.adj) != self.n:
            raise ValueError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbour index >= n")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}{v} out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def __len__(self) -> int:
        return self.n

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def vertices(self) -> VertexSet:
        return frozenset(range(self.n))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in iter_bits(self.adj[v] & ((1 << v) - 1))]

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def __repr__(self) -> str:
        if self.n <= GRAPH6_MAX_N:
            return f"Graph({to_graph6(self)!r})"
        return f"Graph(n={self.n}, m={self.edge_count()})"


# -- named graphs -----------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# -- graph6 -----------------------------------------------------------------

def to_graph6(g: Graph) -> str:
    """Canonical header-free graph6 encoding (short form, n <= 62)."""
    if g.n > GRAPH6_MAX_N:
        raise CapabilityError("graph6 encoding", GRAPH6_MAX_N, g.n)
    bits = [g.adj[j] >> i & 1 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        word = 0
        for b in bits[k:k + 6]:
            word = word << 1 | b
        out.append(chr(word + 63))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    """Parse one graph6 line; an optional ``>>graph6<<`` header is stripped."""
    base = 0
    if text.startswith(GRAPH6_HEADER):
        base = len(GRAPH6_HEADER)
    line = text[base:].rstrip("\r\n")
    if not line:
        raise Graph6Error("empty graph6 line", base)
    for i, ch in enumerate(line):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"invalid character {ch!r}", base + i)
    n = ord(line[0]) - 63
    if n > GRAPH6_MAX_N:
        # 126 introduces the long size form, which this tool does not accept.
        raise CapabilityError("graph6 decoding", GRAPH6_MAX_N, n if n < 63 else 63)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(line) - 1 < nbytes:
        raise Graph6Error(f"truncated: expected {nbytes} data bytes for n={n}", base + len(line))
    if len(line) - 1 > nbytes:
        raise Graph6Error("trailing garbage", base + 1 + nbytes)
    bits = []
    for bi in range(nbytes):
        word = ord(line[1 + bi]) - 63
        bits.extend(word >> shift & 1 for shift in range(5, -1, -1))
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits", base + len(line) - 1)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))


# -- transforms -------------------------------------------------------------

def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(g.adj)))


def induced_mask(g: Graph, mask: int) -> Graph:
    verts = list(iter_bits(mask))
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        row = 0
        for u in iter_bits(g.adj[v] & mask):
            row |= 1 << index[u]
        rows.append(row)
    return Graph(len(verts), tuple(rows))


def induced(g: Graph, s: Iterable[int]) -> Graph:
    """G[S], relabelled to ``0..|S|-1`` in ascending vertex order of S."""
    mask = mask_of(s)
    if mask >> g.n:
        raise ValueError("vertex set has members outside the graph")
    return induced_mask(g, mask)


def blow_up(g: Graph, f: Sequence[int], size_cap: int = BLOWUP_SIZE_CAP) -> Graph:
    """Replace each vertex v by a stable set of ``f[v]`` copies.

    Copies are numbered by (original vertex, copy index).  Copies of u and v
    are adjacent iff uv is an edge of g; zero-weight vertices vanish.
    """
    if len(f) != g.n:
        raise ValueError(f"weight function has length {len(f)}, graph has {g.n} vertices")
    if any(w < 0 for w in f):
        raise ValueError("weights must be non-negative")
    total = sum(f)
    if total > size_cap:
        raise CapabilityError("blow-up size", size_cap, total)
    start = []
    acc = 0
    for w in f:
        start.append(acc)
        acc += w
    block = [((1 << w) - 1) << s for w, s in zip(f, start)]
    rows = []
    for v in range(g.n):
        row = 0
        for u in iter_bits(g.adj[v]):
            row |= block[u]
        rows.extend([row] * f[v])
    return Graph(total, tuple(rows))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shift = g1.n
    return Graph(g1.n + g2.n, g1.adj + tuple(row << shift for row in g2.adj))


def join(g1: Graph, g2: Graph) -> Graph:
    left = g1.full_mask
    right = g2.full_mask << g1.n
    return Graph(
        g1.n + g2.n,
        tuple(row | right for row in g1.adj) + tuple((row << g1.n) | left for row in g2.adj),
    )


# -- queries ----------------------------------------------------------------

def neighborhood(g: Graph, v: int) -> VertexSet:
    return members(g.adj[v])


def neighbors_of_mask(g: Graph, mask: int) -> int:
    """Union of the neighbourhoods of the vertices in ``mask``."""
    out = 0
    for v in iter_bits(mask):
        out |= g.adj[v]
    return out


def component_masks(g: Graph, within: int | None = None) -> list[int]:
    """Components of G[within] as masks, ordered by their minimum vertex."""
    rest = g.full_mask if within is None else within
    comps = []
    while rest:
        seen = rest & -rest
        frontier = seen
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & rest & ~seen
            seen |= frontier
        comps.append(seen)
        rest &= ~seen
    return comps


def is_connected_mask(g: Graph, mask: int) -> bool:
    if not mask:
        return False
    seen = mask & -mask
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def components(g: Graph) -> list[VertexSet]:
    return [members(c) for c in component_masks(g)]


def is_connected(g: Graph) -> bool:
    return is_connected_mask(g, g.full_mask)


def max_degree(g: Graph) -> int:
    return max((row.bit_count() for row in g.adj), default=0)


class Relation(enum.Enum):
    COMPLETE = "complete"
    ANTICOMPLETE = "anticomplete"
    MIXED = "mixed"


def relation_masks(g: Graph, a: int, b: int) -> Relation:
    complete = True
    anti = True
    for v in iter_bits(a):
        hit = g.adj[v] & b
        if hit != b:
            complete = False
        if hit:
            anti = False
        if not complete and not anti:
            return Relation.MIXED
    return Relation.COMPLETE if complete else Relation.ANTICOMPLETE


def pair_relation(g: Graph, a: Iterable[int], b: Iterable[int]) -> Relation:
    am, bm = mask_of(a), mask_of(b)
    if not am or not bm:
        raise ValueError("both sides of a pair must be nonempty")
    if am & bm:
        raise ValueError("the two sides of a pair must be disjoint")
    if (am | bm) >> g.n:
        raise ValueError("vertex set has members outside the graph")
    return relation_masks(g, am, bm)


class Sparsity(enum.Enum):
    SPARSE = "sparse"
    DENSE = "dense"
    NEITHER = "neither"
    BOTH = "both"

    @property
    def restricted(self) -> bool:
        return self is not Sparsity.NEITHER


def _check_eps(eps) -> Fraction:
    eps = as_fraction(eps)
    if not (0 < eps <= Fraction(1, 2)):
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    return eps


def sparsity_of_mask(g: Graph, mask: int, eps: Fraction) -> Sparsity:
    size = mask.bit_count()
    bound = eps * size
    sparse = True
    dense = True
    for v in iter_bits(mask):
        d = (g.adj[v] & mask).bit_count()
        if d > bound:
            sparse = False
        if size - 1 - d > bound:
            dense = False
    if sparse and dense:
        return Sparsity.BOTH
    if sparse:
        return Sparsity.SPARSE
    if dense:
        return Sparsity.DENSE
    return Sparsity.NEITHER


def sparsity_class(g: Graph, eps) -> Sparsity:
    """Classify g as eps-sparse, (1-eps)-dense, both, or neither (exact)."""
    return sparsity_of_mask(g, g.full_mask, _check_eps(eps))


__all__ = [
    "BLOWUP_SIZE_CAP", "GRAPH6_MAX_N", "Graph", "Relation", "Sparsity", "VertexSet",
    "blow_up", "complement", "complete_graph", "component_masks", "components",
    "cycle_graph", "disjoint_union", "empty_graph", "from_graph6", "induced",
    "induced_mask", "is_connected", "is_connected_mask", "join", "lowest", "max_degree",
    "neighborhood", "neighbors_of_mask", "pair_relation", "path_graph", "petersen_graph",
    "relation_masks", "sparsity_class", "sparsity_of_mask", "to_graph6",
]
