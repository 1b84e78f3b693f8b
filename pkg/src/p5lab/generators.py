"""Deterministic graph generators and the exhaustive small-graph corpus.

Labelled graphs on n vertices are indexed by integer codes: the upper
triangle is read in graph6 column order ``(0,1), (0,2), (1,2), (0,3), ...``
and the first pair is the most significant bit, so ascending codes are
ascending graph6 strings.

Random generators draw from numpy's counter-based Philox generator keyed by
the seed; stream ``i`` of a seed is the generator jumped ``i`` times, which
keeps parallel or resumed generation reproducible.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bitset import as_fraction
from .errors import CapabilityError, InvariantViolation, NotP5FreeError, P5LabError
from .graph import (
    GRAPH6_MAX_N,
    Graph,
    blow_up,
    complement,
    complete_graph,
    cycle_graph,
    disjoint_union,
    join,
)
from .structure import find_induced_p5

ALL_GRAPHS_CAP = 8
P5_FREE_CAP = 7


class GenerationFailed(P5LabError, RuntimeError):
    """A rejection sampler ran out of tries."""


# -- integer codes ------------------------------------------------------------

@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for j in range(1, n) for i in range(j))


def graph_from_code(n: int, code: int) -> Graph:
    pairs = pair_list(n)
    m = len(pairs)
    rows = [0] * n
    for k, (i, j) in enumerate(pairs):
        if code >> (m - 1 - k) & 1:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def code_of(g: Graph) -> int:
    code = 0
    for i, j in pair_list(g.n):
        code = code << 1 | (g.adj[j] >> i & 1)
    return code


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labelled graph on n vertices, in ascending code order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > ALL_GRAPHS_CAP:
        raise CapabilityError("all labelled graphs", ALL_GRAPHS_CAP, n)
    for code in range(1 << len(pair_list(n))):
        yield graph_from_code(n, code)


@lru_cache(maxsize=None)
def _p5_patterns() -> np.ndarray:
    """Lookup over the 10-bit pair patterns of 5 labelled vertices: True iff a P5."""
    pairs = pair_list(5)
    table = np.zeros(1 << 10, dtype=bool)
    for perm in itertools.permutations(range(5)):
        edges = {frozenset((perm[i], perm[i + 1])) for i in range(4)}
        code = 0
        for i, j in pairs:
            code = code << 1 | (frozenset((i, j)) in edges)
        table[code] = True
    return table


def p5_free_codes(n: int) -> np.ndarray:
    """Sorted codes of all labelled P5-free graphs on n vertices (vectorised filter).

    The result is cached and returned read-only.
    """
    return _p5_free_codes(n)


@lru_cache(maxsize=None)
def _p5_free_codes(n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > P5_FREE_CAP:
        raise CapabilityError("exhaustive P5-free corpus", P5_FREE_CAP, n)
    pairs = pair_list(n)
    m = len(pairs)
    pos = {p: m - 1 - k for k, p in enumerate(pairs)}
    codes = np.arange(1 << m, dtype=np.int64)
    keep = np.ones(len(codes), dtype=bool)
    table = _p5_patterns()
    for sub in itertools.combinations(range(n), 5):
        pattern = np.zeros(len(codes), dtype=np.int64)
        for i, j in pair_list(5):
            pattern = pattern << 1 | (codes >> pos[(sub[i], sub[j])]) & 1
        keep &= ~table[pattern]
    out = codes[keep]
    out.flags.writeable = False
    return out


def exhaustive_p5_free(n: int) -> Iterator[Graph]:
    """Every labelled P5-free graph on n vertices, in ascending code order."""
    for code in p5_free_codes(n).tolist():
        yield graph_from_code(n, code)


# -- isomorphism orbits of labelled codes ------------------------------------

@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple[np.ndarray, int]:
    """Per-permutation lookup tables mapping 7-bit code chunks to permuted codes."""
    pairs = pair_list(n)
    m = len(pairs)
    index = {p: k for k, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    chunks = max(1, math.ceil(m / 7))
    lut = np.zeros((len(perms), chunks, 128), dtype=np.int64)
    vals = np.arange(128, dtype=np.int64)
    for pi, perm in enumerate(perms):
        for k, (i, j) in enumerate(pairs):
            a, b = sorted((perm[i], perm[j]))
            src_bit = m - 1 - k
            dst_bit = m - 1 - index[(a, b)]
            c, off = divmod(src_bit, 7)
            lut[pi, c] |= ((vals >> off) & 1) << dst_bit
    return lut, chunks


def orbit_of(n: int, code: int) -> np.ndarray:
    """All distinct codes isomorphic to ``code`` (sorted)."""
    lut, chunks = _perm_tables(n)
    out = np.zeros(lut.shape[0], dtype=np.int64)
    for c in range(chunks):
        out |= lut[:, c, (code >> (7 * c)) & 127]
    return np.unique(out)


def orbits(n: int, codes: np.ndarray) -> list[tuple[int, int]]:
    """Group an isomorphism-closed code set into (least code, orbit size) pairs."""
    if n == 0:
        return [(0, 1)] if len(codes) else []
    seen = np.zeros(1 << len(pair_list(n)), dtype=bool)
    out = []
    for code in codes.tolist():
        if seen[code]:
            continue
        orb = orbit_of(n, code)
        seen[orb] = True
        out.append((int(orb[0]), len(orb)))
    return out


# -- seeded randomness --------------------------------------------------------

def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, stream index)."""
    if seed < 0 or seed >= 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    bg = np.random.Philox(key=seed)
    if index:
        bg = bg.jumped(index)
    return np.random.Generator(bg)


def _raw(gen: np.random.Generator, size: int) -> list[int]:
    return gen.bit_generator.random_raw(size).tolist() if size else []


def random_gnp(n: int, p, seed: int, index: int = 0) -> Graph:
    """G(n, p) with exact rational p: pair k is an edge iff draw_k < p * 2**64."""
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > GRAPH6_MAX_N:
        raise CapabilityError("random graph size", GRAPH6_MAX_N, n)
    pairs = pair_list(n)
    draws = _raw(stream(seed, index), len(pairs))
    num, den = p.numerator, p.denominator
    rows = [0] * n
    for (i, j), r in zip(pairs, draws):
        if r * den < num << 64:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def rejection_p5_free(n: int, p, seed: int, max_tries: int = 1000) -> Graph:
    """First P5-free sample among streams 0, 1, ... of the seed."""
    if max_tries < 1:
        raise ValueError("max_tries must be at least 1")
    for attempt in range(max_tries):
        g = random_gnp(n, p, seed, attempt)
        if find_induced_p5(g) is None:
            return g
    raise GenerationFailed(f"no P5-free sample in {max_tries} tries")


def _cograph(n: int, gen: np.random.Generator) -> Graph:
    if n == 1:
        return Graph(1, (0,))
    k = int(gen.integers(1, n))
    left, right = _cograph(k, gen), _cograph(n - k, gen)
    return join(left, right) if gen.integers(0, 2) else disjoint_union(left, right)


def random_cograph(n: int, seed: int, index: int = 0) -> Graph:
    """Random union/join recursion tree; cographs contain no induced P4, so no P5."""
    if n < 1:
        raise ValueError("a cograph needs at least one vertex")
    if n > GRAPH6_MAX_N:
        raise CapabilityError("cograph size", GRAPH6_MAX_N, n)
    g = _cograph(n, stream(seed, index))
    if find_induced_p5(g) is not None:
        raise InvariantViolation("cograph generator produced an induced P5", witness=find_induced_p5(g))
    return g


def is_triangle_free(g: Graph) -> bool:
    return all(not (g.adj[u] & g.adj[v]) for u, v in g.edges())


def complement_of_triangle_free(g: Graph) -> Graph:
    """Complement of a triangle-free graph; alpha <= 2, so it is P5-free."""
    if not is_triangle_free(g):
        raise ValueError("input graph contains a triangle")
    return complement(g)


def triangle_free_process(n: int, seed: int, index: int = 0) -> Graph:
    """Insert the pairs in random order, skipping any that would close a triangle."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > GRAPH6_MAX_N:
        raise CapabilityError("triangle-free process size", GRAPH6_MAX_N, n)
    pairs = pair_list(n)
    order = stream(seed, index).permutation(len(pairs)).tolist()
    rows = [0] * n
    for k in order:
        i, j = pairs[k]
        if not rows[i] & rows[j]:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def triangle_free_complement(n: int, seed: int, index: int = 0) -> Graph:
    g = complement_of_triangle_free(triangle_free_process(n, seed, index))
    # a stable triple here would be a triangle in the base graph
    if not is_triangle_free(complement(g)):
        raise InvariantViolation("triangle-free complement has a stable triple")
    return g


def _piece(gen: np.random.Generator) -> Graph:
    choice = int(gen.integers(0, 3))
    if choice == 0:
        return complete_graph(int(gen.integers(1, 4)))
    if choice == 1:
        return cycle_graph(5)
    return _cograph(int(gen.integers(1, 5)), gen)


def blowup_closure(base: Graph, seed: int, size_cap: int = 40, steps: int = 3, index: int = 0) -> Graph:
    """Random mix of blow-ups, disjoint unions and joins applied to ``base``.

    Fresh pieces are small cliques, C5 or small cographs.  Operations that
    would exceed ``size_cap`` are skipped; the result is re-checked for P5s.
    """
    p5 = find_induced_p5(base)
    if p5 is not None:
        raise NotP5FreeError(p5)
    size_cap = min(size_cap, GRAPH6_MAX_N)
    gen = stream(seed, index)
    g = base
    for _ in range(steps):
        op = int(gen.integers(0, 3))
        if op == 0 and g.n:
            f = [int(w) for w in gen.integers(0, 3, size=g.n)]
            if sum(f) == 0:
                f[0] = 1
            if sum(f) <= size_cap:
                g = blow_up(g, f)
            continue
        piece = _piece(gen)
        if g.n + piece.n > size_cap:
            continue
        g = disjoint_union(g, piece) if op == 1 else join(g, piece)
    p5 = find_induced_p5(g)
    if p5 is not None:
        raise InvariantViolation("blow-up closure produced an induced P5", witness=p5)
    return g


# -- generation specs ---------------------------------------------------------

class Kind(enum.Enum):
    ALL = "all"
    GNP = "gnp"
    COGRAPH = "cograph"
    TRIANGLE_FREE_COMPLEMENT = "tfc"
    BLOWUP_CLOSURE = "blowup"
    REJECTION_P5_FREE = "p5free"


@dataclass(frozen=True)
class GenSpec:
    kind: Kind
    n: int
    p: Fraction = Fraction(1, 2)
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.count < 1:
            raise ValueError("count must be at least 1")


def generate(spec: GenSpec) -> Iterator[Graph]:
    """Graphs described by ``spec``; instance i of a random kind uses stream i."""
    kind = Kind(spec.kind)
    if kind is Kind.ALL:
        yield from all_graphs(spec.n)
        return
    if spec.n > GRAPH6_MAX_N:
        raise CapabilityError(f"{kind.value} generator size", GRAPH6_MAX_N, spec.n)
    for i in range(spec.count):
        if kind is Kind.GNP:
            yield random_gnp(spec.n, spec.p, spec.seed, i)
        elif kind is Kind.COGRAPH:
            yield random_cograph(spec.n, spec.seed, i)
        elif kind is Kind.TRIANGLE_FREE_COMPLEMENT:
            yield triangle_free_complement(spec.n, spec.seed, i)
        elif kind is Kind.REJECTION_P5_FREE:
            yield rejection_p5_free(spec.n, spec.p, (spec.seed + i) % (1 << 64))
        else:
            base = random_cograph(max(spec.n, 1), spec.seed, i)
            yield blowup_closure(base, spec.seed, index=i)


def random_p5_free(count: int, n_max: int, seed: int, n_min: int = 1) -> list[Graph]:
    """A mixed seeded sample of P5-free graphs with n_min <= n <= n_max."""
    out = []
    gen = stream(seed)
    for i in range(count):
        n = int(gen.integers(n_min, n_max + 1))
        which = i % 3
        if which == 0:
            g = random_cograph(n, seed, i + 1)
        elif which == 1:
            g = triangle_free_complement(n, seed, i + 1)
        else:
            sub = (seed * 7919 + i) % (1 << 64)
            p = Fraction(int(gen.integers(1, 10)), 10)
            try:
                g = rejection_p5_free(n, p, sub)
            except GenerationFailed:
                # dense mid-range G(n,p) rarely avoids P5 for n >= 11; grow a small sample instead
                g = blowup_closure(rejection_p5_free(6, p, sub), sub, size_cap=n, steps=6)
        out.append(g)
    return out


__all__ = [
    "GenSpec", "GenerationFailed", "Kind", "all_graphs", "blowup_closure", "code_of",
    "complement_of_triangle_free", "exhaustive_p5_free", "generate", "graph_from_code",
    "is_triangle_free", "orbit_of", "orbits", "p5_free_codes", "pair_list", "random_cograph",
    "random_gnp", "random_p5_free", "rejection_p5_free", "stream", "triangle_free_complement",
    "triangle_free_process",
]
