"""Certificates for the complete-pair / blockade / anticomplete-pair trichotomy.

Three engines live here:

* :func:`trichotomy_search` looks, exhaustively, for the best certificate of
  each shape and reports the constants it achieves.
* :func:`anti_decompose` runs the cutset decomposition constructively on a
  (p, q)-sparse graph, validating every intermediate partition.
* :func:`validate_certificate` re-derives every claimed relation and Hall
  ratio from scratch and lists each inequality with exact values.

The arithmetic helpers (:func:`phi`, :func:`induction_step_inequality`) are
exact rational evaluations of the constant schedule used by the induction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .bitset import as_fraction, fraction_str, iter_bits, lowest, mask_of, members, sorted_members
from .errors import CapabilityError, InvariantViolation, NotP5FreeError, PartitionError
from .graph import (
    Graph,
    Relation,
    VertexSet,
    _check_eps,
    component_masks,
    induced_mask,
    is_connected,
    is_connected_mask,
    neighbors_of_mask,
    relation_masks,
)
from .invariants import hall_ratio, omega
from .structure import (
    Blockade,
    comb,
    find_complete_blockade,
    find_induced_p5,
    minimal_cutset_mask,
)
from .subsets import subset_table

TRICHOTOMY_CAP = 14
TRICHOTOMY_HARD_CAP = 20
PQ_SPARSE_CAP = 14
DEFAULT_D = 9


# -- constant schedule and induction arithmetic -----------------------------

def _factor(i: int) -> Fraction:
    den = 1 << (1 << (i + 1))
    return Fraction(den - 1, den)


def phi(r: int, s: int) -> Fraction:
    """Product of (1 - 2**-(2**(i+1))) over r < i <= s."""
    if r < 0 or s < 0:
        raise ValueError("phi needs non-negative indices")
    if r > s:
        raise ValueError(f"phi needs r <= s, got r={r}, s={s}")
    out = Fraction(1)
    for i in range(r + 1, s + 1):
        out *= _factor(i)
    return out


def phi_lower_bound_check(r: int, s: int) -> bool:
    """phi(r, s) >= 1 - 2**(-1 - 2**r), exactly."""
    return phi(r, s) >= 1 - Fraction(1, 1 << (1 + (1 << r)))


def induction_step_inequality(y) -> bool:
    """1 - 3y >= (1 - y)**9 for y in (0, 1/4]."""
    y = as_fraction(y)
    if not 0 < y <= Fraction(1, 4):
        raise ValueError(f"y must lie in (0, 1/4], got {y}")
    return 1 - 3 * y >= (1 - y) ** 9


# -- Hall ratios of vertex subsets -------------------------------------------

def rho_of_set(g: Graph, s) -> Fraction:
    """Hall ratio of G[s] (s a mask or an iterable of vertices)."""
    mask = s if isinstance(s, int) else mask_of(s)
    if not mask:
        return Fraction(0)
    if g.n <= 16:
        return subset_table(g).rho_of(mask)
    return hall_ratio(induced_mask(g, mask)).value


# -- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class AnticompletePair:
    a: VertexSet
    b: VertexSet
    rho_a: Fraction
    rho_b: Fraction
    bound_a: Fraction | None = None
    bound_b: Fraction | None = None
    kind = "anticomplete_pair"


@dataclass(frozen=True)
class CompletePair:
    x: VertexSet
    y: VertexSet
    rho_x: Fraction
    rho_y: Fraction
    y_param: Fraction | None = None
    bound_x: Fraction | None = None
    bound_y: Fraction | None = None
    kind = "complete_pair"

    def __post_init__(self):
        if self.y_param is not None and not 0 < self.y_param <= Fraction(1, 4):
            raise ValueError("y_param must lie in (0, 1/4]")


@dataclass(frozen=True)
class CompleteBlockade:
    blockade: Blockade
    per_block_rho: tuple[Fraction, ...]
    min_k: int | None = None
    kind = "complete_blockade"


Certificate = Union[AnticompletePair, CompletePair, CompleteBlockade]


@dataclass(frozen=True)
class Check:
    inequality: str
    lhs: object
    rhs: object
    passed: bool

    def to_json(self) -> dict:
        def enc(v):
            return fraction_str(v) if isinstance(v, (Fraction, int)) and not isinstance(v, bool) else v
        return {"inequality": self.inequality, "lhs": enc(self.lhs), "rhs": enc(self.rhs), "pass": self.passed}


@dataclass(frozen=True)
class Verdict:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


def _relation_check(g: Graph, x, y, want: Relation, label: str) -> Check:
    xm, ym = mask_of(x), mask_of(y)
    if not xm or not ym or xm & ym:
        return Check(f"{label} nonempty and disjoint", "no", "yes", False)
    got = relation_masks(g, xm, ym)
    text = f"{label} {want.value}"
    if got is not want:
        # name one offending pair so corrupted certificates are easy to read
        for u in iter_bits(xm):
            hit = g.adj[u] & ym
            bad = ym & ~hit if want is Relation.COMPLETE else hit
            if bad:
                text += f" (offending pair {u},{lowest(bad)})"
                break
    return Check(text, got.value, want.value, got is want)


def _power_ge(ratio: Fraction, k: int, d: Fraction) -> bool:
    """ratio >= k**(-d), decided exactly as ratio**b * k**a >= 1 for d = a/b."""
    if ratio <= 0:
        return False
    a, b = d.numerator, d.denominator
    return ratio ** b * Fraction(k) ** a >= 1


def validate_certificate(g: Graph, c: Certificate, rho_g=None, d=DEFAULT_D) -> Verdict:
    """Recompute relations and Hall ratios and test every required inequality."""
    rho_g = rho_of_set(g, g.full_mask) if rho_g is None else as_fraction(rho_g)
    d = as_fraction(d)
    checks: list[Check] = []

    def rho_claim(name, s, claimed):
        actual = rho_of_set(g, s)
        checks.append(Check(f"rho({name}) matches claim", actual, claimed, actual == claimed))
        return actual

    def lower(name, actual, bound, what):
        checks.append(Check(f"rho({name}) >= {what}", actual, bound, actual >= bound))

    if isinstance(c, AnticompletePair):
        checks.append(_relation_check(g, c.a, c.b, Relation.ANTICOMPLETE, "(A,B)"))
        ra = rho_claim("A", c.a, c.rho_a)
        rb = rho_claim("B", c.b, c.rho_b)
        if c.bound_a is not None:
            lower("A", ra, c.bound_a, "claimed bound")
        if c.bound_b is not None:
            lower("B", rb, c.bound_b, "claimed bound")
    elif isinstance(c, CompletePair):
        checks.append(_relation_check(g, c.x, c.y, Relation.COMPLETE, "(X,Y)"))
        rx = rho_claim("X", c.x, c.rho_x)
        ry = rho_claim("Y", c.y, c.rho_y)
        if c.y_param is not None:
            y = c.y_param
            checks.append(Check("0 < y <= 1/4", y, Fraction(1, 4), 0 < y <= Fraction(1, 4)))
            lower("X", rx, y ** 9 * rho_g, "y^9 rho(G)")
            lower("Y", ry, (1 - 3 * y) * rho_g, "(1-3y) rho(G)")
        if c.bound_x is not None:
            lower("X", rx, c.bound_x, "claimed bound")
        if c.bound_y is not None:
            lower("Y", ry, c.bound_y, "claimed bound")
    elif isinstance(c, CompleteBlockade):
        blocks = c.blockade.blocks
        k = len(blocks)
        checks.append(Check("k >= 2", k, 2, k >= 2))
        if c.min_k is not None:
            checks.append(Check("k >= claimed minimum", k, c.min_k, k >= c.min_k))
        if len(c.per_block_rho) != k:
            checks.append(Check("one claimed rho per block", len(c.per_block_rho), k, False))
        for i, j in itertools.combinations(range(k), 2):
            checks.append(_relation_check(g, blocks[i], blocks[j], Relation.COMPLETE, f"(B{i},B{j})"))
        for i, blk in enumerate(blocks):
            claimed = c.per_block_rho[i] if i < len(c.per_block_rho) else None
            actual = rho_claim(f"B{i}", blk, claimed)
            ok = _power_ge(actual / rho_g, k, d) if rho_g else True
            if d.denominator == 1:
                rhs = rho_g / Fraction(k) ** d.numerator if d >= 0 else rho_g * Fraction(k) ** -d.numerator
            else:
                rhs = f"{k}^(-{d})*{fraction_str(rho_g)}"
            checks.append(Check(f"rho(B{i}) >= k^-d rho(G)", actual, rhs, ok))
    else:
        raise TypeError(f"not a certificate: {type(c).__name__}")
    return Verdict(tuple(checks))


def certificate_to_json(c: Certificate) -> dict:
    out: dict = {"kind": c.kind}
    if isinstance(c, AnticompletePair):
        out.update(a=sorted(c.a), b=sorted(c.b), rho_a=fraction_str(c.rho_a), rho_b=fraction_str(c.rho_b))
        extra = {"bound_a": c.bound_a, "bound_b": c.bound_b}
    elif isinstance(c, CompletePair):
        out.update(x=sorted(c.x), y=sorted(c.y), rho_x=fraction_str(c.rho_x), rho_y=fraction_str(c.rho_y))
        extra = {"y_param": c.y_param, "bound_x": c.bound_x, "bound_y": c.bound_y}
    else:
        out.update(blocks=[sorted(b) for b in c.blockade.blocks],
                   per_block_rho=[fraction_str(r) for r in c.per_block_rho])
        extra = {"min_k": c.min_k}
    for key, val in extra.items():
        if val is not None:
            out[key] = val if isinstance(val, int) and not isinstance(val, Fraction) else fraction_str(val)
    return out


def certificate_from_json(obj: dict) -> Certificate:
    def opt(key):
        return Fraction(obj[key]) if key in obj else None

    kind = obj["kind"]
    if kind == "anticomplete_pair":
        return AnticompletePair(frozenset(obj["a"]), frozenset(obj["b"]), Fraction(obj["rho_a"]),
                                Fraction(obj["rho_b"]), opt("bound_a"), opt("bound_b"))
    if kind == "complete_pair":
        return CompletePair(frozenset(obj["x"]), frozenset(obj["y"]), Fraction(obj["rho_x"]),
                            Fraction(obj["rho_y"]), opt("y_param"), opt("bound_x"), opt("bound_y"))
    if kind == "complete_blockade":
        blk = Blockade(tuple(frozenset(b) for b in obj["blocks"]))
        return CompleteBlockade(blk, tuple(Fraction(r) for r in obj["per_block_rho"]), obj.get("min_k"))
    raise ValueError(f"unknown certificate kind {kind!r}")


# -- (p, q)-sparsity ----------------------------------------------------------

def _upward_closure(seed: np.ndarray, n: int) -> np.ndarray:
    out = seed.copy()
    for v in range(n):
        view = out.reshape(-1, 2, 1 << v)
        view[:, 1, :] |= view[:, 0, :]
    return out


def _minimal_sets(t, rank: int) -> np.ndarray:
    ok = t.rho_rank >= rank
    idx = np.arange(1 << t.n, dtype=np.int64)
    minimal = ok.copy()
    for v in range(t.n):
        has = (idx >> v) & 1 == 1
        minimal &= ~has | (t.rho_rank[idx ^ (1 << v)] < rank)
    return np.flatnonzero(minimal)


def pq_sparsity_violation(g: Graph, p, q) -> VertexSet | None:
    """Least induced subgraph with rho >= q but no anticomplete pair of rho >= p."""
    p, q = as_fraction(p), as_fraction(q)
    if not 0 < p <= q:
        raise ValueError("need 0 < p <= q")
    if g.n > PQ_SPARSE_CAP:
        raise CapabilityError("(p,q)-sparsity check", PQ_SPARSE_CAP, g.n)
    if g.n == 0:
        return None
    t = subset_table(g)
    # a set contains a good pair iff it contains A | B for minimal A, B
    mins = _minimal_sets(t, t.rank_of(p))
    seed = np.zeros(1 << g.n, dtype=bool)
    closed = mins | t.nbr[mins]
    for a, na in zip(mins.tolist(), closed.tolist()):
        partners = mins[(mins & na) == 0]
        seed[a | partners] = True
    has_pair = _upward_closure(seed, g.n)
    bad = np.flatnonzero((t.rho_rank >= t.rank_of(q)) & ~has_pair)
    return members(int(bad[0])) if len(bad) else None


def check_pq_sparse(g: Graph, p, q) -> bool:
    """Every induced F with rho(F) >= q has an anticomplete pair, both sides rho >= p."""
    return pq_sparsity_violation(g, p, q) is None


# -- trichotomy search --------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    certificate: Certificate
    valid: bool
    constants: dict


@dataclass(frozen=True)
class TrichotomyResult:
    certificate: Certificate | None
    rho_g: Fraction
    complete_pair: Candidate | None
    blockade: Candidate | None
    anticomplete: Candidate | None
    summary: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.certificate is None


def _choose_y(rx: Fraction, ry: Fraction) -> Fraction | None:
    """Smallest workable y in (0, 1/4] with y^9 <= rx and 1-3y <= ry, preferring 1/4."""
    quarter = Fraction(1, 4)
    if quarter ** 9 <= rx and 1 - 3 * quarter <= ry:
        return quarter
    y_min = (1 - ry) / 3
    if y_min > quarter:
        return None
    if y_min > 0:
        return y_min if y_min ** 9 <= rx else None
    m = 3
    while Fraction(1, 1 << m) ** 9 > rx:
        m += 1
    return Fraction(1, 1 << m)


def _best_complete_pair(g: Graph, t, rho_g: Fraction) -> tuple[Candidate | None, int]:
    full = g.full_mask
    size = 1 << g.n
    cn = np.full(size, full, dtype=np.int64)
    for k in range(g.n):
        cn[(1 << k):(2 << k)] = cn[: 1 << k] & g.adj[k]
    xs = np.flatnonzero(t.connected)
    ys = cn[xs]
    keep = ys != 0
    xs, ys = xs[keep], ys[keep]
    if not len(xs):
        return None, 0
    rx_rank, ry_rank = t.rho_rank[xs], t.rho_rank[ys]
    y_of: dict[tuple[int, int], Fraction | None] = {}
    for a, b in set(zip(rx_rank.tolist(), ry_rank.tolist())):
        y_of[(a, b)] = _choose_y(t.values[a] / rho_g, t.values[b] / rho_g)
    best_key, best = None, None
    for x, y, a, b in zip(xs.tolist(), ys.tolist(), rx_rank.tolist(), ry_rank.tolist()):
        valid = y_of[(a, b)] is not None
        key = (valid, b, a, -x)
        if best_key is None or key > best_key:
            best_key, best = key, (x, y, a, b)
    x, y, a, b = best
    yp = y_of[(a, b)]
    cert = CompletePair(members(x), members(y), t.values[a], t.values[b], y_param=yp)
    consts = {"rho_x_ratio": t.values[a] / rho_g, "rho_y_ratio": t.values[b] / rho_g, "y": yp}
    return Candidate(cert, yp is not None, consts), len(xs)


def _d_needed(ratio: Fraction, k: int) -> float:
    return math.log(1 / ratio) / math.log(k) if ratio < 1 else 0.0


def _best_blockade(g: Graph, t, rho_g: Fraction, d: Fraction, eps: Fraction, cancel=None, cap=TRICHOTOMY_CAP):
    w = omega(g)
    best = None
    tried = 0
    values = [v for v in t.values if 0 < v <= rho_g]
    for k in range(2, w + 1):
        lo, hi, found = 0, len(values) - 1, None
        while lo <= hi:  # largest per-block bound that still admits k blocks
            mid = (lo + hi) // 2
            tried += 1
            res = find_complete_blockade(g, k, values[mid], cancel=cancel, cap=cap)
            if res.blockade is not None:
                found, lo = (values[mid], res.blockade), mid + 1
            else:
                hi = mid - 1
        if found is None:
            continue
        m, blk = found
        ratio = m / rho_g
        valid = _power_ge(ratio, k, d)
        key = (valid, -_d_needed(ratio, k), k)
        if best is None or key > best[0]:
            per = tuple(t.rho_of(mask_of(b)) for b in blk.blocks)
            cert = CompleteBlockade(blk, per)
            consts = {"k": k, "min_rho_ratio": ratio, "d_needed": _d_needed(ratio, k),
                      "k_at_least_inverse_eps": k * eps >= 1}
            best = (key, Candidate(cert, valid, consts))
    return (best[1] if best else None), tried


def _best_anticomplete(g: Graph, t) -> Candidate | None:
    idx = np.arange(1, 1 << g.n, dtype=np.int64)
    rest = g.full_mask & ~(idx | t.nbr[idx])
    score = np.minimum(t.size[idx], t.size[rest])
    if not len(score) or score.max() == 0:
        return None
    i = int(np.argmax(score))
    a, b = int(idx[i]), int(rest[i])
    cert = AnticompletePair(members(a), members(b), t.rho_of(a), t.rho_of(b))
    return Candidate(cert, True, {"size_fraction": Fraction(int(score[i]), g.n)})


def trichotomy_search(g: Graph, eps, d=DEFAULT_D, cancel=None, cap: int = TRICHOTOMY_CAP) -> TrichotomyResult:
    """Best certificate of each shape, with the constants each achieves.

    The returned ``certificate`` is the first valid one in the order complete
    pair, complete blockade (checked at exponent ``d``), anticomplete pair.
    ``certificate is None`` means no shape has any certificate at all; the
    summary then records the size of the space searched.
    """
    eps = _check_eps(eps)
    d = as_fraction(d)
    if g.n < 2:
        raise ValueError("trichotomy search needs at least two vertices")
    if g.n > min(cap, TRICHOTOMY_HARD_CAP):
        raise CapabilityError("trichotomy search", min(cap, TRICHOTOMY_HARD_CAP), g.n)
    p5 = find_induced_p5(g)
    if p5 is not None:
        raise NotP5FreeError(p5)
    t = subset_table(g)
    rho_g = t.rho_of(g.full_mask)
    cp, n_pairs = _best_complete_pair(g, t, rho_g)
    bl, n_block = _best_blockade(g, t, rho_g, d, eps, cancel, cap)
    ap = _best_anticomplete(g, t)
    chosen = None
    for cand in (cp, bl, ap):
        if cand is not None and cand.valid:
            chosen = cand.certificate
            break
    summary = {
        "n": g.n, "rho_g": rho_g, "connected_sets": int(t.connected.sum()),
        "complete_pairs_examined": n_pairs, "blockade_searches": n_block,
        "anticomplete_found": ap is not None,
    }
    return TrichotomyResult(chosen, rho_g, cp, bl, ap, summary)


# -- constructive cutset decomposition ---------------------------------------

@dataclass(frozen=True)
class Partition:
    a: int
    d: int
    blocks: tuple[int, ...]
    e: int

    def to_json(self) -> dict:
        return {"A": sorted_members(self.a), "D": sorted_members(self.d),
                "B": [sorted_members(b) for b in self.blocks], "E": sorted_members(self.e)}


@dataclass(frozen=True)
class TraceStep:
    step: str
    partition: Partition | None = None
    sets: dict = field(default_factory=dict)
    note: str = ""

    def to_json(self) -> dict:
        out = {"step": self.step, "note": self.note,
               "sets": {k: sorted_members(v) for k, v in self.sets.items()}}
        if self.partition is not None:
            out["partition"] = self.partition.to_json()
        return out


@dataclass(frozen=True)
class DecompositionResult:
    certificate: Certificate
    outcome: int
    trace: tuple[TraceStep, ...]


def validate_partition(g: Graph, part: Partition, p: Fraction, a_bound: Fraction) -> None:
    """Raise :class:`PartitionError` naming the first violated property."""
    parts = [part.a, *part.blocks, part.e]
    if not part.a or not part.d or not part.blocks or not all(part.blocks):
        raise PartitionError("nonempty", "A, D and every B_i must be nonempty")
    total = part.d
    for x in parts:
        if total & x:
            raise PartitionError("disjoint", f"overlap on {sorted_members(total & x)}")
        total |= x
    if total != g.full_mask:
        raise PartitionError("covering", f"missing {sorted_members(g.full_mask & ~total)}")
    for i, x in enumerate(parts):
        for y in parts[i + 1:]:
            if x and y and neighbors_of_mask(g, x) & y:
                raise PartitionError("cutset", "an edge joins two parts outside D")
    for name, x in [("A", part.a)] + [(f"B{i}", b) for i, b in enumerate(part.blocks)]:
        if not is_connected_mask(g, x):
            raise PartitionError("connected", f"{name} is not connected")
    bunion = 0
    for b in part.blocks:
        bunion |= b
    for v in iter_bits(part.d):
        if not g.adj[v] & bunion:
            raise PartitionError("attachment", f"vertex {v} of D has no neighbour in the blocks")
    if rho_of_set(g, part.a) < a_bound:
        raise PartitionError("rho", "rho(A) below max(p, q - 2 eps^8 rho(G))")
    if part.e and rho_of_set(g, part.e) >= p:
        raise PartitionError("rho", "rho(E) >= p")
    for i, b in enumerate(part.blocks):
        if rho_of_set(g, b) < p:
            raise PartitionError("rho", f"rho(B{i}) < p")


def _lex_key(mask: int) -> list[int]:
    return sorted_members(mask)


def _best_anticomplete_within(g: Graph, t, region: int, p: Fraction) -> tuple[int, int] | None:
    """Connected anticomplete (A, B) in G[region] with rho(A) >= rho(B) >= p, rho(A) maximal.

    Ties go to the lexicographically least sorted vertex lists.
    """
    idx = np.flatnonzero(t.connected)
    idx = idx[(idx & ~region) == 0]
    rank_p = t.rank_of(p)
    idx = idx[t.rho_rank[idx] >= rank_p]
    if not len(idx):
        return None
    rest = region & ~(idx | t.nbr[idx])
    ok = t.rho_rank[rest] >= rank_p
    idx, rest = idx[ok], rest[ok]
    if not len(idx):
        return None
    top = t.rho_rank[idx].max()
    pick = idx[t.rho_rank[idx] == top]
    a = min(pick.tolist(), key=_lex_key)
    r = region & ~(a | int(t.nbr[a]))
    bs = np.flatnonzero(t.connected)
    bs = bs[((bs & ~r) == 0) & (t.rho_rank[bs] >= rank_p)]
    b = min(bs.tolist(), key=_lex_key)
    return a, b


@dataclass
class _Ctx:
    g: Graph
    t: object
    eps: Fraction
    p: Fraction
    q: Fraction
    rho_g: Fraction
    trace: list

    @property
    def e8(self) -> Fraction:
        return self.eps ** 8 * self.rho_g

    @property
    def a_bound(self) -> Fraction:
        return max(self.p, self.q - 2 * self.e8)


def _complete_to(g: Graph, v: int, x: int) -> bool:
    return g.adj[v] & x == x


def _sparse_cut(ctx: _Ctx, region: int):
    """Split a connected region of rho >= q along a minimal cutset.

    Returns ``("pair", certificate)`` when the cutset carries a heavy complete
    pair, else ``("cut", A, S)`` with A the full component of the best side.
    """
    g, t = ctx.g, ctx.t
    found = _best_anticomplete_within(g, t, region, ctx.p)
    if found is None:
        raise InvariantViolation("(p,q)-sparsity failed inside the decomposition",
                                 witness=sorted_members(region))
    a, b = found
    s = minimal_cutset_mask(g, a, b, within=region)
    s_a = s_b = 0
    for v in iter_bits(s):
        ca, cb = _complete_to(g, v, a), _complete_to(g, v, b)
        if not (ca or cb):
            raise InvariantViolation(f"cutset vertex {v} is complete to neither side",
                                     witness=find_induced_p5(g))
        s_a |= (1 << v) if ca else 0
        s_b |= (1 << v) if cb else 0
    ctx.trace.append(TraceStep("cutset", sets={"region": region, "A": a, "B": b, "S": s,
                                                 "S_complete_to_A": s_a, "S_complete_to_B": s_b}))
    for side, sm, other in ((a, s_a, "A"), (b, s_b, "B")):
        if sm and t.rho_of(sm) >= ctx.e8:
            cert = CompletePair(members(sm), members(side), t.rho_of(sm), t.rho_of(side),
                                bound_x=ctx.e8, bound_y=ctx.p)
            ctx.trace.append(TraceStep("outcome", sets={"X": sm, "Y": side},
                                       note=f"cutset vertices complete to {other} are heavy"))
            return ("pair", cert)
    comp_a = next(c for c in component_masks(g, region & ~s) if c & a)
    if t.rho_of(comp_a) < ctx.a_bound:
        raise InvariantViolation("side A of the cut lost too much Hall ratio",
                                 witness=sorted_members(comp_a))
    return ("cut", comp_a, s, b)


def _split_rest(ctx: _Ctx, rest: int) -> tuple[list[int], int]:
    blocks, e = [], 0
    for c in component_masks(ctx.g, rest):
        if ctx.t.rho_of(c) >= ctx.p:
            blocks.append(c)
        else:
            e |= c
    return blocks, e


def anti_decompose(g: Graph, eps, p, q) -> DecompositionResult:
    """Run the cutset decomposition and return the outcome it reaches.

    Outcomes: 1, an anticomplete pair (A, B) with rho(A) >= q - 2 eps^8
    rho(G) and rho(B) >= (1 - eps^2) rho(G); 2, a complete pair with
    rho(X) >= eps^8 rho(G) and rho(Y) >= p; 3, a complete blockade with
    k >= 1/eps blocks of rho >= k^-8 rho(G).  Every partition on the way is
    validated and recorded in the trace.
    """
    eps = _check_eps(eps)
    p, q = as_fraction(p), as_fraction(q)
    if g.n > PQ_SPARSE_CAP:
        raise CapabilityError("cutset decomposition", PQ_SPARSE_CAP, g.n)
    if g.n == 0 or not is_connected(g):
        raise ValueError("graph must be connected and non-null")
    p5 = find_induced_p5(g)
    if p5 is not None:
        raise NotP5FreeError(p5)
    t = subset_table(g)
    rho_g = t.rho_of(g.full_mask)
    if not 0 < p <= q <= (1 - eps ** 2) * rho_g:
        raise ValueError(f"need 0 < p <= q <= (1 - eps^2) rho(G) = {(1 - eps ** 2) * rho_g}")
    bad = pq_sparsity_violation(g, p, q)
    if bad is not None:
        raise ValueError(f"graph is not ({p},{q})-sparse: witness {sorted(bad)}")

    ctx = _Ctx(g, t, eps, p, q, rho_g, [])

    def done(cert, outcome):
        verdict = validate_certificate(g, cert, rho_g, d=8)
        if not verdict.passed:
            raise InvariantViolation("decomposition produced an invalid certificate",
                                     witness=[c.inequality for c in verdict.failures()])
        return DecompositionResult(cert, outcome, tuple(ctx.trace))

    res = _sparse_cut(ctx, g.full_mask)
    if res[0] == "pair":
        return done(res[1], 2)
    _, a, d, _ = res
    blocks, e = _split_rest(ctx, g.full_mask & ~(a | d))
    part = Partition(a, d, tuple(blocks), e)
    validate_partition(g, part, p, ctx.a_bound)
    ctx.trace.append(TraceStep("partition", part, note="initial cut"))

    while t.rho_of(part.a) >= q:
        res = _sparse_cut(ctx, part.a)
        if res[0] == "pair":
            return done(res[1], 2)
        _, a2, s2, _ = res
        new_blocks, e2 = _split_rest(ctx, part.a & ~(a2 | s2))
        if not new_blocks:
            raise InvariantViolation("growth step found no new block", witness=sorted_members(part.a))
        part = Partition(a2, part.d | s2, part.blocks + tuple(new_blocks), part.e | e2)
        validate_partition(g, part, p, ctx.a_bound)
        ctx.trace.append(TraceStep("grow", part, note=f"k = {len(part.blocks)}"))

    a = part.a
    s = part.d & neighbors_of_mask(g, a)
    ctx.trace.append(TraceStep("attachment", part, sets={"S": s}))
    rest = g.full_mask & ~(a | s)
    if t.rho_of(s) <= eps ** 2 * rho_g:
        cert = AnticompletePair(members(a), members(rest), t.rho_of(a), t.rho_of(rest),
                                bound_a=q - 2 * ctx.e8, bound_b=(1 - eps ** 2) * rho_g)
        ctx.trace.append(TraceStep("outcome", sets={"A": a, "B": rest}, note="light attachment set"))
        return done(cert, 1)

    mixed = 0
    for v in iter_bits(s):
        if not _complete_to(g, v, a):
            mixed |= 1 << v
    full_att = s & ~mixed
    if full_att and t.rho_of(full_att) >= ctx.e8:
        cert = CompletePair(members(full_att), members(a), t.rho_of(full_att), t.rho_of(a),
                            bound_x=ctx.e8, bound_y=p)
        ctx.trace.append(TraceStep("outcome", sets={"X": full_att, "Y": a},
                                   note="attachment vertices complete to A are heavy"))
        return done(cert, 2)
    s0 = t.hall_witness(mixed)
    per_block = []
    for i, b in enumerate(part.blocks):
        si = 0
        for v in iter_bits(s0):
            hit = g.adj[v] & b
            if hit == b:
                si |= 1 << v
            elif hit:
                raise InvariantViolation(f"vertex {v} is mixed on block {i}", witness=find_induced_p5(g))
        per_block.append(si)
        if si and t.rho_of(si) >= ctx.e8:
            cert = CompletePair(members(si), members(b), t.rho_of(si), t.rho_of(b),
                                bound_x=ctx.e8, bound_y=p)
            ctx.trace.append(TraceStep("outcome", sets={"X": si, "Y": b},
                                       note=f"attachment vertices complete to B{i} are heavy"))
            return done(cert, 2)
    size0 = s0.bit_count()
    anchors = [lowest(b) for b in part.blocks]
    delta = Fraction(16, 15) * eps ** 6 * size0
    gamma = Fraction(3, 1280) * eps ** -6 * size0
    outcome = comb(g, anchors, members(s0), delta, gamma)
    ctx.trace.append(TraceStep("comb", part, sets={"S0": s0}, note=f"teeth k = {outcome.k}"))
    if outcome.small:
        raise InvariantViolation("comb reported a small set where |S0|^2 = 400 gamma delta")
    blk = Blockade(outcome.blocks)
    cert = CompleteBlockade(blk, tuple(t.rho_of(mask_of(x)) for x in blk.blocks),
                            min_k=math.ceil(1 / eps))
    return done(cert, 3)


__all__ = [
    "AnticompletePair", "Candidate", "Certificate", "Check", "CompleteBlockade", "CompletePair",
    "DecompositionResult", "Partition", "TraceStep", "TrichotomyResult", "Verdict",
    "anti_decompose", "certificate_from_json", "certificate_to_json", "check_pq_sparse",
    "induction_step_inequality", "phi", "phi_lower_bound_check", "pq_sparsity_violation",
    "rho_of_set", "trichotomy_search", "validate_certificate", "validate_partition",
]
