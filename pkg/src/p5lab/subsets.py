"""Per-graph tables of alpha, psi, rho and connectivity over every vertex subset.

All exhaustive searches in this package query Hall ratios of many subsets of
one small graph, so the values are computed once for all ``2**n`` masks with
vectorised subset dynamic programming:

* ``alpha[S]``: for the top vertex k of S, either k is unused or it is taken
  and its neighbours are discarded.
* ``rho[S]`` is the subset-maximum of ``psi`` (a zeta transform in the max
  semiring), stored as ranks into the sorted list of all ratios ``p/q`` with
  ``q <= p <= n`` so comparisons stay exact.
* ``connected[S]`` by iterated neighbourhood closure from the lowest vertex.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapabilityError
from .graph import Graph

TABLE_HARD_CAP = 24


def _ratio_values(n: int) -> tuple[list[Fraction], np.ndarray]:
    vals = sorted({Fraction(0)} | {Fraction(p, q) for q in range(1, n + 1) for p in range(q, n + 1)})
    pos = {v: i for i, v in enumerate(vals)}
    rank = np.zeros((n + 1, n + 1), dtype=np.int32)
    for p in range(1, n + 1):
        for q in range(1, p + 1):
            rank[p, q] = pos[Fraction(p, q)]
    return vals, rank


class SubsetTable:
    """Exact alpha / psi / rho / connectivity for every induced subgraph of ``g``."""

    def __init__(self, g: Graph, cap: int = TABLE_HARD_CAP):
        n = g.n
        if n > min(cap, TABLE_HARD_CAP):
            raise CapabilityError("subset table", min(cap, TABLE_HARD_CAP), n)
        self.graph = g
        self.n = n
        size = 1 << n
        idx = np.arange(size, dtype=np.int64)
        self.size = np.bitwise_count(idx).astype(np.int32)

        alpha = np.zeros(size, dtype=np.int32)
        nbr = np.zeros(size, dtype=np.int64)
        for k in range(n):
            lo = idx[: 1 << k]
            keep = ~g.adj[k] & ((1 << k) - 1)
            alpha[(1 << k):(2 << k)] = np.maximum(alpha[: 1 << k], 1 + alpha[lo & keep])
            nbr[(1 << k):(2 << k)] = nbr[: 1 << k] | g.adj[k]
        self.alpha = alpha
        self.nbr = nbr

        self.values, rank = _ratio_values(n)
        psi_rank = rank[self.size, alpha]
        self.psi_rank = psi_rank
        rho = psi_rank.copy()
        for v in range(n):
            view = rho.reshape(-1, 2, 1 << v)
            np.maximum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
        self.rho_rank = rho

        reach = idx & -idx
        for _ in range(max(n - 1, 0)):
            grown = idx & (reach | nbr[reach])
            if np.array_equal(grown, reach):
                break
            reach = grown
        self.connected = (reach == idx) & (idx != 0)

    # scalar accessors -------------------------------------------------------
    def alpha_of(self, mask: int) -> int:
        return int(self.alpha[mask])

    def psi_of(self, mask: int) -> Fraction:
        return self.values[int(self.psi_rank[mask])]

    def rho_of(self, mask: int) -> Fraction:
        return self.values[int(self.rho_rank[mask])]

    def rank_of(self, value: Fraction) -> int:
        """Smallest rank whose ratio is >= value (``len(values)`` if none)."""
        import bisect

        return bisect.bisect_left(self.values, Fraction(value))

    def is_connected(self, mask: int) -> bool:
        return bool(self.connected[mask])

    def neighbours(self, mask: int) -> int:
        return int(self.nbr[mask])

    def hall_witness(self, within: int | None = None) -> int:
        """Connected subset attaining rho(within): largest, then smallest mask."""
        full = (1 << self.n) - 1 if within is None else within
        if not full:
            return 0
        target = self.rho_rank[full]
        idx = np.arange(1 << self.n, dtype=np.int64)
        ok = self.connected & (self.psi_rank == target) & ((idx & ~full) == 0)
        cands = np.flatnonzero(ok)
        best = max(cands.tolist(), key=lambda m: (self.size[m], -m))
        return int(best)


@lru_cache(maxsize=64)
def subset_table(g: Graph) -> SubsetTable:
    return SubsetTable(g)
