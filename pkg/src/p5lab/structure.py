"""P5 detection, pair and blockade searches, minimal cutsets and the comb procedure."""

from __future__ import annotations

import enum
import itertools
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitset import as_fraction, iter_bits, lowest, mask_of, members, sorted_members
from .errors import CapabilityError, InvariantViolation
from .graph import (
    Graph,
    induced_mask,
    Relation,
    Sparsity,
    VertexSet,
    complement,
    component_masks,
    is_connected,
    is_connected_mask,
    neighbors_of_mask,
    relation_masks,
    sparsity_of_mask,
    _check_eps,
)
from .invariants import Cancelled, _check_cancel, hall_ratio, psi
from .subsets import subset_table

PAIR_EXHAUSTIVE_CAP = 20
BLOCKADE_EXHAUSTIVE_CAP = 14
RESTRICTED_EXHAUSTIVE_CAP = 18
COMB_EXHAUSTIVE_ANCHORS = 20


class Mode(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    HEURISTIC = "heuristic"


# -- P5 detection -----------------------------------------------------------

def find_induced_p5(g: Graph) -> tuple[int, int, int, int, int] | None:
    """Lexicographically least ordered induced P5, or None if g is P5-free."""
    adj = g.adj
    closed = [row | 1 << v for v, row in enumerate(adj)]
    inner = [row.bit_count() >= 2 for row in adj]
    for v1 in range(g.n):
        if not adj[v1]:
            continue
        for v2 in iter_bits(adj[v1]):
            if not inner[v2]:
                continue
            c12 = closed[v1] | closed[v2]
            for v3 in iter_bits(adj[v2] & ~closed[v1]):
                if not inner[v3]:
                    continue
                for v4 in iter_bits(adj[v3] & ~c12):
                    if not inner[v4]:
                        continue
                    ends = adj[v4] & ~c12 & ~closed[v3]
                    if ends:
                        return (v1, v2, v3, v4, lowest(ends))
    return None


def is_p5_free(g: Graph) -> bool:
    return find_induced_p5(g) is None


# -- search results ---------------------------------------------------------

@dataclass(frozen=True)
class PairSearch:
    pair: tuple[VertexSet, VertexSet] | None
    exhaustive: bool

    @property
    def note(self) -> str:
        return "exhaustive search" if self.exhaustive else "incomplete search"

    def __bool__(self) -> bool:
        return self.pair is not None


@dataclass(frozen=True)
class Blockade:
    blocks: tuple[VertexSet, ...]

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("blockade blocks must be nonempty")
            if seen & b:
                raise ValueError("blockade blocks must be pairwise disjoint")
            seen |= b

    @property
    def k(self) -> int:
        return len(self.blocks)

    def kind(self, g: Graph) -> Relation:
        """COMPLETE or ANTICOMPLETE if every pair of blocks is; MIXED otherwise."""
        rels = {relation_masks(g, mask_of(x), mask_of(y))
                for x, y in itertools.combinations(self.blocks, 2)}
        if len(rels) == 1:
            return rels.pop()
        if not rels:
            return Relation.COMPLETE
        return Relation.MIXED


@dataclass(frozen=True)
class BlockadeSearch:
    blockade: Blockade | None
    exhaustive: bool

    @property
    def note(self) -> str:
        return "exhaustive search" if self.exhaustive else "incomplete search"

    def __bool__(self) -> bool:
        return self.blockade is not None


def _rho_lower(g: Graph, mask: int) -> Fraction:
    """Exact rho when the subgraph is small enough, otherwise psi (a lower bound)."""
    sub = induced_mask(g, mask)
    if sub.n <= 16:
        return hall_ratio(sub).value
    return psi(sub)


# -- anticomplete pairs -----------------------------------------------------

def find_anticomplete_pair(g: Graph, min_rho_a, min_rho_b, mode: Mode = Mode.EXHAUSTIVE,
                           cap: int = PAIR_EXHAUSTIVE_CAP) -> PairSearch:
    """Disjoint anticomplete (A, B) with rho(A) >= min_rho_a and rho(B) >= min_rho_b.

    Exhaustive mode scans connected A in ascending mask order and takes B to
    be everything outside the closed neighbourhood of A; since rho is
    monotone and attained on a connected subgraph this is complete.
    """
    ra, rb = as_fraction(min_rho_a), as_fraction(min_rho_b)
    mode = Mode(mode)
    full = g.full_mask
    if mode is Mode.EXHAUSTIVE:
        if g.n > cap:
            raise CapabilityError("exhaustive anticomplete-pair search", cap, g.n)
        if g.n < 2:
            return PairSearch(None, True)
        t = subset_table(g)
        cands = np.flatnonzero(t.connected & (t.rho_rank >= t.rank_of(ra)))
        rest = full & ~(cands | t.nbr[cands])
        ok = np.flatnonzero(t.rho_rank[rest] >= t.rank_of(rb))
        ok = ok[rest[ok] != 0]
        if not len(ok):
            return PairSearch(None, True)
        i = int(ok[0])
        return PairSearch((members(int(cands[i])), members(int(rest[i]))), True)

    seeds = component_masks(g) + [1 << v for v in range(g.n)]
    for a in seeds:
        b = full & ~(a | neighbors_of_mask(g, a))
        if b and _rho_lower(g, a) >= ra and _rho_lower(g, b) >= rb:
            return PairSearch((members(a), members(b)), False)
    return PairSearch(None, False)


# -- minimal cutsets --------------------------------------------------------

def _reach(g: Graph, start: int, allowed: int) -> int:
    seen = start & allowed
    frontier = seen
    while frontier:
        frontier = neighbors_of_mask(g, frontier) & allowed & ~seen
        seen |= frontier
    return seen


def separates(g: Graph, s: int, a: int, b: int, within: int | None = None) -> bool:
    """True iff G[within] - s has no path between a and b."""
    region = g.full_mask if within is None else within
    return not _reach(g, a, region & ~s) & b


def minimal_cutset_mask(g: Graph, a: int, b: int, within: int | None = None) -> int:
    """Mask version of :func:`minimal_cutset`, optionally inside G[within]."""
    region = g.full_mask if within is None else within
    if not a or not b:
        raise ValueError("both sides must be nonempty")
    if a & b:
        raise ValueError("sides must be disjoint")
    if (a | b) & ~region:
        raise ValueError("sides must lie inside the region")
    if relation_masks(g, a, b) is not Relation.ANTICOMPLETE:
        raise ValueError("sides must be anticomplete")
    if not is_connected_mask(g, region):
        raise ValueError("graph must be connected")
    s = neighbors_of_mask(g, a) & region & ~a
    for v in iter_bits(s):
        if separates(g, s & ~(1 << v), a, b, region):
            s &= ~(1 << v)
    if not s or not separates(g, s, a, b, region):
        raise InvariantViolation("cutset does not separate", witness=sorted_members(s))
    for v in iter_bits(s):
        if separates(g, s & ~(1 << v), a, b, region):
            raise InvariantViolation(f"cutset not minimal at vertex {v}", witness=sorted_members(s))
    return s


def minimal_cutset(g: Graph, a: Iterable[int], b: Iterable[int]) -> VertexSet:
    """Inclusion-minimal nonempty S separating a from b.

    Starts from all neighbours of a and drops vertices in ascending order
    while separation persists.  Both post-conditions are re-checked.
    """
    return members(minimal_cutset_mask(g, mask_of(a), mask_of(b)))


class Attachment(enum.Enum):
    COMPLETE_TO_A = "complete_to_a"
    COMPLETE_TO_B = "complete_to_b"
    MIXED_ON_A = "mixed_on_a"
    MIXED_ON_BOTH = "mixed_on_both"


@dataclass(frozen=True)
class VertexAttachment:
    vertex: int
    kind: Attachment
    complete_to_a: bool
    complete_to_b: bool
    mixed_on_a: bool
    mixed_on_b: bool


def _attachment(g: Graph, v: int, a: int, b: int) -> VertexAttachment:
    na, nb = g.adj[v] & a, g.adj[v] & b
    ca, cb = na == a, nb == b
    ma, mb = bool(na) and not ca, bool(nb) and not cb
    if ca:
        kind = Attachment.COMPLETE_TO_A
    elif cb:
        kind = Attachment.MIXED_ON_A if ma else Attachment.COMPLETE_TO_B
    else:
        kind = Attachment.MIXED_ON_BOTH
    return VertexAttachment(v, kind, ca, cb, ma, mb)


def cutset_attachment_split(g: Graph, s: Iterable[int], a: Iterable[int], b: Iterable[int],
                            assume_p5_free: bool = True) -> dict[int, VertexAttachment]:
    """Classify each cutset vertex by how it attaches to the two sides.

    ``MIXED_ON_BOTH`` means complete to neither side.  For a P5-free graph,
    connected sides and a minimal cutset this cannot occur; when
    ``assume_p5_free`` is set, finding one raises with an induced P5.
    """
    sm, am, bm = mask_of(s), mask_of(a), mask_of(b)
    if not (am and bm and sm):
        raise ValueError("cutset and both sides must be nonempty")
    if (sm & am) or (sm & bm) or (am & bm):
        raise ValueError("cutset and sides must be pairwise disjoint")
    if not (is_connected_mask(g, am) and is_connected_mask(g, bm)):
        raise ValueError("both sides must induce connected subgraphs")
    if not separates(g, sm, am, bm):
        raise ValueError("s does not separate a from b")
    for v in iter_bits(sm):
        if separates(g, sm & ~(1 << v), am, bm):
            raise ValueError(f"s is not minimal (vertex {v} is redundant)")
    out = {v: _attachment(g, v, am, bm) for v in iter_bits(sm)}
    bad = [v for v, att in out.items() if att.kind is Attachment.MIXED_ON_BOTH]
    if bad and assume_p5_free:
        raise InvariantViolation(
            f"vertex {bad[0]} of a minimal cutset is complete to neither side",
            witness=find_induced_p5(g),
        )
    return out


# -- comb -------------------------------------------------------------------

@dataclass(frozen=True)
class CombOutcome:
    small: bool
    anchors: tuple[int, ...] = ()
    blocks: tuple[VertexSet, ...] = ()

    @property
    def k(self) -> int:
        return len(self.anchors)


def _private_blocks(g: Graph, chosen: list[int], b: int) -> list[int]:
    out = []
    for i, a in enumerate(chosen):
        others = 0
        for j, c in enumerate(chosen):
            if j != i:
                others |= g.adj[c]
        out.append(g.adj[a] & b & ~others)
    return out


def _teeth_ok(blocks: list[int], gamma: Fraction) -> bool:
    k = len(blocks)
    return k > 0 and all(blk.bit_count() * k * k >= gamma for blk in blocks)


def _greedy_comb(g: Graph, anchors: list[int], b: int, gamma: Fraction):
    nb = {a: g.adj[a] & b for a in anchors}
    # prune to a minimal dominating subfamily, dropping low-degree anchors first
    keep = list(anchors)
    for a in sorted(anchors, key=lambda a: (nb[a].bit_count(), a)):
        rest = 0
        for c in keep:
            if c != a:
                rest |= nb[c]
        if rest & b == b:
            keep.remove(a)
    private = dict(zip(keep, _private_blocks(g, keep, b)))
    ranked = sorted(keep, key=lambda a: (-private[a].bit_count(), a))
    for k in range(len(ranked), 0, -1):
        chosen = ranked[:k]
        blocks = _private_blocks(g, chosen, b)
        if _teeth_ok(blocks, gamma):
            return chosen, blocks
    best = max(anchors, key=lambda a: (nb[a].bit_count(), -a))
    if nb[best].bit_count() >= gamma:
        return [best], [nb[best]]
    return None


def _exhaustive_comb(g: Graph, anchors: list[int], b: int, gamma: Fraction):
    if len(anchors) > COMB_EXHAUSTIVE_ANCHORS:
        raise CapabilityError("exhaustive comb search (anchors)", COMB_EXHAUSTIVE_ANCHORS, len(anchors))
    for k in range(len(anchors), 0, -1):
        for chosen in itertools.combinations(anchors, k):
            blocks = _private_blocks(g, list(chosen), b)
            if _teeth_ok(blocks, gamma):
                return list(chosen), blocks
    return None


def comb(g: Graph, anchors: Iterable[int], b: Iterable[int], delta, gamma) -> CombOutcome:
    """Either report ``|b|**2 < 400*gamma*delta`` or build a comb.

    A comb is anchors a_1..a_k with disjoint blocks B_i of b, each a_i
    complete to B_i and anticomplete to every other block, and
    ``|B_i| * k**2 >= gamma``.  A greedy pass runs first; if it fails where
    a comb is required, an exhaustive pass over anchor subsets follows.
    """
    am, bm = mask_of(anchors), mask_of(b)
    delta, gamma = as_fraction(delta), as_fraction(gamma)
    if not am or not bm or am & bm:
        raise ValueError("anchors and b must be nonempty and disjoint")
    if delta <= 0 or gamma <= 0:
        raise ValueError("delta and gamma must be positive")
    alist = sorted_members(am)
    for a in alist:
        if (g.adj[a] & bm).bit_count() > delta:
            raise ValueError(f"anchor {a} has more than delta neighbours in b")
    if neighbors_of_mask(g, am) & bm != bm:
        raise ValueError("every vertex of b needs a neighbour among the anchors")

    size = bm.bit_count()
    found = _greedy_comb(g, alist, bm, gamma)
    if found is None:
        if size * size < 400 * gamma * delta:
            return CombOutcome(small=True)
        found = _exhaustive_comb(g, alist, bm, gamma)
        if found is None:
            raise InvariantViolation("no comb exists although |b|^2 >= 400*gamma*delta",
                                     witness=(alist, sorted_members(bm)))
    chosen, blocks = found
    out = CombOutcome(False, tuple(chosen), tuple(members(x) for x in blocks))
    problems = validate_comb(g, out, gamma)
    if problems:
        raise InvariantViolation("comb output failed validation: " + "; ".join(problems))
    return out


def validate_comb(g: Graph, c: CombOutcome, gamma) -> list[str]:
    """Post-hoc certificate check; returns a list of problems (empty when valid)."""
    gamma = as_fraction(gamma)
    if c.small:
        return []
    problems = []
    k = c.k
    if k < 1 or len(c.blocks) != k:
        return ["anchor and block counts differ or are zero"]
    masks = [mask_of(x) for x in c.blocks]
    for i in range(k):
        for j in range(i + 1, k):
            if masks[i] & masks[j]:
                problems.append(f"blocks {i} and {j} overlap")
    for i, a in enumerate(c.anchors):
        if masks[i].bit_count() * k * k < gamma:
            problems.append(f"block {i} has {masks[i].bit_count()} vertices < gamma/k^2")
        for j, m in enumerate(masks):
            hit = g.adj[a] & m
            if i == j and hit != m:
                problems.append(f"anchor {a} not complete to block {j}")
            if i != j and hit:
                problems.append(f"anchor {a} has a neighbour in block {j}")
    return problems


# -- complete blockades -----------------------------------------------------

def _common_table(g: Graph) -> np.ndarray:
    size = 1 << g.n
    cn = np.full(size, g.full_mask, dtype=np.int64)
    for k in range(g.n):
        cn[(1 << k):(2 << k)] = cn[: 1 << k] & g.adj[k]
    return cn


def _minimal_blocks(t, rank: int) -> np.ndarray:
    ok = t.rho_rank >= rank
    idx = np.arange(1 << t.n, dtype=np.int64)
    minimal = ok.copy()
    for v in range(t.n):
        has = (idx >> v) & 1 == 1
        minimal &= ~has | (t.rho_rank[idx ^ (1 << v)] < rank)
    return np.flatnonzero(minimal)


def find_complete_blockade(g: Graph, k_min: int, min_rho_per_block,
                           mode: Mode = Mode.EXHAUSTIVE, cancel=None,
                           cap: int = BLOCKADE_EXHAUSTIVE_CAP) -> BlockadeSearch:
    """Complete blockade with at least ``k_min`` blocks, each of rho >= the bound.

    Exhaustive mode searches blockades of exactly ``k_min`` inclusion-minimal
    blocks (merging blocks of a longer blockade, or shrinking a block, never
    breaks completeness or the bound), ordered by minimum vertex.
    """
    m = as_fraction(min_rho_per_block)
    mode = Mode(mode)
    if k_min < 1:
        raise ValueError("k_min must be at least 1")
    if mode is Mode.HEURISTIC:
        cocomps = component_masks(complement(g))
        good = [c for c in cocomps if _rho_lower(g, c) >= m]
        if len(good) >= k_min:
            return BlockadeSearch(Blockade(tuple(members(c) for c in good)), False)
        return BlockadeSearch(None, False)

    if g.n > cap:
        raise CapabilityError("exhaustive complete-blockade search", cap, g.n)
    if g.n == 0:
        return BlockadeSearch(None, True)
    t = subset_table(g)
    rank = t.rank_of(m)
    cands = _minimal_blocks(t, rank)
    if not len(cands):
        return BlockadeSearch(None, True)
    cn = _common_table(g)

    def dfs(blocks: list[int], allowed: int):
        _check_cancel(cancel)
        if len(blocks) == k_min:
            return list(blocks)
        sel = cands[((cands & ~allowed) == 0)]
        for c in sel.tolist():
            low = lowest(c)
            nxt = allowed & int(cn[c]) & ~((2 << low) - 1)
            res = dfs(blocks + [c], nxt)
            if res is not None:
                return res
        return None

    found = dfs([], g.full_mask)
    if found is None:
        return BlockadeSearch(None, True)
    return BlockadeSearch(Blockade(tuple(members(c) for c in found)), True)


# -- eps-restricted subgraphs ----------------------------------------------

def _restricted_exhaustive(g: Graph, eps: Fraction) -> int:
    size = 1 << g.n
    idx = np.arange(size, dtype=np.int64)
    cnt = np.bitwise_count(idx).astype(np.int64)
    maxdeg = np.zeros(size, dtype=np.int64)
    mindeg = np.full(size, g.n, dtype=np.int64)
    for v in range(g.n):
        inside = (idx >> v) & 1 == 1
        d = np.bitwise_count(idx & g.adj[v]).astype(np.int64)
        maxdeg = np.where(inside, np.maximum(maxdeg, d), maxdeg)
        mindeg = np.where(inside, np.minimum(mindeg, d), mindeg)
    num, den = eps.numerator, eps.denominator
    sparse = maxdeg * den <= num * cnt
    dense = (cnt - 1 - mindeg) * den <= num * cnt
    ok = (sparse | dense) & (idx != 0)
    best = int(cnt[ok].max())
    return int(np.flatnonzero(ok & (cnt == best))[0])


def _restricted_greedy(g: Graph, eps: Fraction) -> int:
    def peel(h: Graph) -> int:
        mask = h.full_mask
        while mask:
            size = mask.bit_count()
            worst, excess = -1, None
            for v in iter_bits(mask):
                over = (h.adj[v] & mask).bit_count() - eps * size
                if over > 0 and (excess is None or over > excess):
                    worst, excess = v, over
            if worst < 0:
                return mask
            mask &= ~(1 << worst)
        return mask

    sparse = peel(g)
    dense = peel(complement(g))
    return sparse if sparse.bit_count() >= dense.bit_count() else dense


def find_eps_restricted_subgraph(g: Graph, eps) -> tuple[VertexSet, Sparsity]:
    """Largest vertex set inducing an eps-sparse or (1-eps)-dense subgraph.

    Exact below the exhaustive cap; a peeling heuristic on g and on its
    complement above it.
    """
    eps = _check_eps(eps)
    if g.n == 0:
        return frozenset(), Sparsity.BOTH
    if g.n <= RESTRICTED_EXHAUSTIVE_CAP:
        mask = _restricted_exhaustive(g, eps)
    else:
        mask = _restricted_greedy(g, eps)
    return members(mask), sparsity_of_mask(g, mask, eps)


__all__ = [
    "Attachment", "Blockade", "BlockadeSearch", "Cancelled", "CombOutcome", "Mode",
    "PairSearch", "VertexAttachment", "comb", "cutset_attachment_split",
    "find_anticomplete_pair", "find_complete_blockade", "find_eps_restricted_subgraph",
    "find_induced_p5", "is_p5_free", "minimal_cutset", "minimal_cutset_mask", "separates",
    "validate_comb",
]
