"""Exact rational simplex for packing LPs.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0`` over
:class:`fractions.Fraction`, so the all-slack basis is feasible and no
phase one is needed.  Bland's rule guarantees termination.  The optimal
dual (one value per row) is read off the slack columns of the final
objective row, which gives both sides of the duality in one solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from collections.abc import Sequence


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    pivots: int


class UnboundedLP(ArithmeticError):
    pass


def maximize(c: Sequence, a: Sequence[Sequence], b: Sequence) -> LPResult:
    m = len(a)
    n = len(c)
    if len(b) != m:
        raise ValueError("row count of A does not match b")
    if any(Fraction(bi) < 0 for bi in b):
        raise ValueError("packing form requires b >= 0")
    width = n + m
    # rows[i] = coefficients over (x_0..x_{n-1}, s_0..s_{m-1}) followed by rhs
    rows = []
    for i, row in enumerate(a):
        if len(row) != n:
            raise ValueError(f"row {i} of A has length {len(row)}, expected {n}")
        r = [Fraction(v) for v in row] + [Fraction(0)] * m + [Fraction(b[i])]
        r[n + i] = Fraction(1)
        rows.append(r)
    obj = [-Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))
    pivots = 0
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = rows[i][enter]
            if coef > 0:
                ratio = rows[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise UnboundedLP(f"objective unbounded along column {enter}")
        prow = rows[leave]
        piv = prow[enter]
        if piv != 1:
            prow = [v / piv for v in prow]
            rows[leave] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(m):
            if i != leave:
                f = rows[i][enter]
                if f:
                    r = rows[i]
                    for j in nz:
                        r[j] -= f * prow[j]
        f = obj[enter]
        for j in nz:
            obj[j] -= f * prow[j]
        basis[leave] = enter
        pivots += 1
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][-1]
    dual = tuple(obj[n + i] for i in range(m))
    return LPResult(value=obj[-1], primal=tuple(x), dual=dual, pivots=pivots)
