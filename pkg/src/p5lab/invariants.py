"""Exact graph invariants: alpha, omega, chi, psi, chi*, Hall ratio, LP dual weights.

Every value is an int or a :class:`~fractions.Fraction`; nothing here is
approximate.  The fractional chromatic number is solved as an exact LP over
the maximal stable sets (enough, since weight on a stable set can always be
moved to a maximal superset).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from .bitset import iter_bits, lowest, members
from .errors import CapabilityError
from .graph import Graph, VertexSet, complement
from .lp import maximize
from .subsets import subset_table

HALL_RATIO_CAP = 16


class Cancelled(Exception):
    """Raised when a long search observes its cancellation signal."""


def _check_cancel(cancel):
    if cancel is not None and cancel.is_set():
        raise Cancelled()


# -- maximum clique / stable set --------------------------------------------

def _degree_order(adj: tuple[int, ...]) -> list[int]:
    return sorted(range(len(adj)), key=lambda v: (-adj[v].bit_count(), v))


def _relabel(adj: tuple[int, ...], order: list[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    out = []
    for v in order:
        row = 0
        for u in iter_bits(adj[v]):
            row |= 1 << pos[u]
        out.append(row)
    return tuple(out)


def _colour_sort(adj, cand: int) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring of ``cand``; returns vertices with colour bounds."""
    order: list[int] = []
    bounds: list[int] = []
    colour = 0
    rest = cand
    while rest:
        colour += 1
        q = rest
        while q:
            v = lowest(q)
            q &= ~adj[v] & ~(1 << v)
            rest &= ~(1 << v)
            order.append(v)
            bounds.append(colour)
    return order, bounds


def _max_clique_mask(adj: tuple[int, ...], cancel=None) -> int:
    n = len(adj)
    if n == 0:
        return 0
    order = _degree_order(adj)
    radj = _relabel(adj, order)
    best = [0, 0]  # size, mask (relabelled)

    def expand(clique: int, size: int, cand: int):
        _check_cancel(cancel)
        verts, bounds = _colour_sort(radj, cand)
        for i in range(len(verts) - 1, -1, -1):
            if size + bounds[i] <= best[0]:
                return
            v = verts[i]
            new = cand & radj[v]
            if new:
                expand(clique | 1 << v, size + 1, new)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, clique | 1 << v
            cand &= ~(1 << v)

    expand(0, 0, (1 << n) - 1)
    out = 0
    for i in iter_bits(best[1]):
        out |= 1 << order[i]
    return out


def max_clique(g: Graph, cancel=None) -> VertexSet:
    return members(_max_clique_mask(g.adj, cancel))


def max_stable_set(g: Graph, cancel=None) -> VertexSet:
    return members(_max_clique_mask(complement(g).adj, cancel))


def omega(g: Graph, cancel=None) -> int:
    return _max_clique_mask(g.adj, cancel).bit_count()


def alpha(g: Graph, cancel=None) -> int:
    return _max_clique_mask(complement(g).adj, cancel).bit_count()


# -- chromatic number -------------------------------------------------------

def _dsatur_upper(g: Graph) -> int:
    colour = [-1] * g.n
    for _ in range(g.n):
        v = max(
            (u for u in range(g.n) if colour[u] < 0),
            key=lambda u: (len({colour[w] for w in iter_bits(g.adj[u]) if colour[w] >= 0}),
                           g.degree(u), -u),
        )
        used = {colour[w] for w in iter_bits(g.adj[v])}
        colour[v] = next(c for c in range(g.n) if c not in used)
    return max(colour, default=-1) + 1


def _colourable(g: Graph, k: int, cancel=None) -> bool:
    classes: list[int] = []
    coloured = 0
    full = g.full_mask

    def pick() -> int:
        best, key = -1, None
        for v in iter_bits(full & ~coloured):
            sat = sum(1 for c in classes if g.adj[v] & c)
            cand = (sat, g.degree(v))
            if key is None or cand > key:
                best, key = v, cand
        return best

    def search() -> bool:
        nonlocal coloured
        _check_cancel(cancel)
        if coloured == full:
            return True
        v = pick()
        bit = 1 << v
        coloured |= bit
        for i, c in enumerate(classes):
            if not g.adj[v] & c:
                classes[i] = c | bit
                if search():
                    return True
                classes[i] = c
        if len(classes) < k:
            classes.append(bit)
            if search():
                return True
            classes.pop()
        coloured &= ~bit
        return False

    return search()


def chi(g: Graph, cancel=None) -> int:
    """Exact chromatic number (0 for the null graph)."""
    if g.n == 0:
        return 0
    upper = _dsatur_upper(g)
    for k in range(max(omega(g, cancel), 1), upper):
        if _colourable(g, k, cancel):
            return k
    return upper


# -- stable-set enumeration -------------------------------------------------

def maximal_stable_set_masks(g: Graph) -> list[int]:
    """All maximal stable sets, as masks in ascending order.

    Bron-Kerbosch with pivoting, run on the complement (maximal cliques there).
    """
    if g.n == 0:
        return []
    cadj = complement(g).adj
    found: list[int] = []

    def bk(r: int, p: int, x: int):
        if not p and not x:
            found.append(r)
            return
        pivot = max(iter_bits(p | x), key=lambda u: (cadj[u] & p).bit_count())
        for v in iter_bits(p & ~cadj[pivot]):
            bk(r | 1 << v, p & cadj[v], x & cadj[v])
            p &= ~(1 << v)
            x |= 1 << v

    bk(0, g.full_mask, 0)
    return sorted(found)


def maximal_stable_sets(g: Graph) -> list[VertexSet]:
    return [members(m) for m in maximal_stable_set_masks(g)]


# -- ratios ----------------------------------------------------------------

def psi(g: Graph) -> Fraction:
    if g.n == 0:
        return Fraction(0)
    return Fraction(g.n, alpha(g))


@dataclass(frozen=True)
class HallRatio:
    value: Fraction
    witness: VertexSet


def hall_ratio(g: Graph, cap: int = HALL_RATIO_CAP) -> HallRatio:
    """Maximum of psi over induced subgraphs, with a connected witness."""
    if g.n > cap:
        raise CapabilityError("hall ratio", cap, g.n)
    if g.n == 0:
        return HallRatio(Fraction(0), frozenset())
    table = subset_table(g)
    full = g.full_mask
    return HallRatio(table.rho_of(full), members(table.hall_witness(full)))


# -- fractional chromatic number -------------------------------------------

@dataclass(frozen=True)
class FractionalColouring:
    value: Fraction
    weights: dict  # frozenset -> Fraction, positive weights only


@dataclass(frozen=True)
class DualWitness:
    f: tuple[int, ...]
    s_star: VertexSet
    value: Fraction


@lru_cache(maxsize=4096)
def _stable_set_lp(g: Graph):
    sets = maximal_stable_set_masks(g)
    rows = [[(s >> v) & 1 for v in range(g.n)] for s in sets]
    res = maximize([1] * g.n, rows, [1] * len(sets))
    return sets, res


def chi_star(g: Graph) -> FractionalColouring:
    """Exact fractional chromatic number and an optimal fractional colouring."""
    if g.n == 0:
        return FractionalColouring(Fraction(0), {})
    sets, res = _stable_set_lp(g)
    weights = {members(s): x for s, x in zip(sets, res.dual) if x}
    return FractionalColouring(res.value, weights)


def dual_weights(g: Graph) -> DualWitness:
    """Integer vertex weights f with f(V) >= chi*(g) f(I) for every stable I.

    The exact dual optimum is scaled by the lcm of its denominators and then
    reduced by the gcd; ``s_star`` is the first maximal stable set that is
    tight, where ``f(V) = chi*(g) f(s_star)`` holds.
    """
    if g.n == 0:
        raise ValueError("dual weights need a non-null graph")
    sets, res = _stable_set_lp(g)
    y = res.primal
    scale = math.lcm(*(v.denominator for v in y))
    f = [int(v * scale) for v in y]
    div = math.gcd(*f)
    f = tuple(w // div for w in f)
    total = sum(f)
    for s in sets:
        fs = sum(f[v] for v in iter_bits(s))
        if fs * res.value == total:
            return DualWitness(f, members(s), res.value)
    raise ArithmeticError("no tight stable set at the LP optimum")


# -- empirical exponent -----------------------------------------------------

@dataclass(frozen=True)
class ExponentEstimate:
    d_hat: Decimal | None
    n: int
    alpha: int
    omega: int


def exponent_from_triple(n: int, a: int, w: int) -> Decimal | None:
    """Smallest d with a * w**d >= n, to 12 significant digits (None if trivial)."""
    if w <= 1 or n <= a:
        return None
    with localcontext() as ctx:
        ctx.prec = 40
        val = (Decimal(n) / Decimal(a)).ln() / Decimal(w).ln()
        ctx.prec = 12
        return +val


def empirical_exponent(g: Graph) -> ExponentEstimate:
    a, w = alpha(g), omega(g)
    return ExponentEstimate(exponent_from_triple(g.n, a, w), g.n, a, w)
