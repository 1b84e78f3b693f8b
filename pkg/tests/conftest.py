"""Brute-force oracles shared by the test modules.

Everything here is deliberately naive: subsets are enumerated with
itertools, so these helpers are only usable on a handful of vertices.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import strategies as st

from p5lab import Graph


def adjacent(g: Graph, u: int, v: int) -> bool:
    return bool(g.adj[u] >> v & 1)


def is_stable(g: Graph, s) -> bool:
    return not any(adjacent(g, u, v) for u, v in itertools.combinations(s, 2))


def is_clique(g: Graph, s) -> bool:
    return all(adjacent(g, u, v) for u, v in itertools.combinations(s, 2))


def subsets(n: int, min_size: int = 0):
    for k in range(min_size, n + 1):
        yield from itertools.combinations(range(n), k)


def brute_alpha(g: Graph) -> int:
    return max(len(s) for s in subsets(g.n) if is_stable(g, s))


def brute_omega(g: Graph) -> int:
    return max(len(s) for s in subsets(g.n) if is_clique(g, s))


def brute_chi(g: Graph) -> int:
    if g.n == 0:
        return 0
    edges = [(u, v) for u, v in itertools.combinations(range(g.n), 2) if adjacent(g, u, v)]
    for k in range(1, g.n + 1):
        for col in itertools.product(range(k), repeat=g.n):
            if all(col[u] != col[v] for u, v in edges):
                return k
    raise AssertionError("unreachable")


def brute_psi(g: Graph, s) -> Fraction:
    s = list(s)
    if not s:
        return Fraction(0)
    a = max(len(t) for t in subsets(len(s)) if is_stable(g, [s[i] for i in t]))
    return Fraction(len(s), a)


def brute_hall(g: Graph) -> Fraction:
    return max((brute_psi(g, s) for s in subsets(g.n, 1)), default=Fraction(0))


def has_induced_p5(g: Graph) -> bool:
    for s in itertools.combinations(range(g.n), 5):
        for p in itertools.permutations(s):
            if p[0] > p[-1]:
                continue
            if all(adjacent(g, p[i], p[j]) == (j == i + 1) for i in range(5) for j in range(i + 1, 5)):
                return True
    return False


def stable_sets(g: Graph):
    return [s for s in subsets(g.n, 1) if is_stable(g, s)]


@st.composite
def graphs(draw, max_n=9, min_n=0):
    """Labelled graphs with each pair drawn independently."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance verdict lines, one per criterion that ran."""
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
