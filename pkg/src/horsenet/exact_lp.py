"""Dense two-phase simplex over exact rationals.

Small problems only (a few dozen rows/columns). Arithmetic uses
``gmpy2.mpq``; inputs may be ints, ``Fraction`` or ``mpq`` and solutions
are returned as ``Fraction``. Bland's rule guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpq

__all__ = ["LPResult", "solve_lp", "to_mpq", "to_fraction"]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def to_fraction(x) -> Fraction:
    return Fraction(int(gmpy2.numer(x)), int(gmpy2.denom(x)))


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Tableau:
    def __init__(self, rows: list[list[mpq]], rhs: list[mpq], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        p = row[j]
        if p != 1:
            inv = 1 / p
            row[:] = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[j]
            if f:
                other[:] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = j

    def run(self, cost: list[mpq], allowed: int) -> str:
        """Minimize ``cost . x`` over columns ``< allowed``; Bland's rule."""
        while True:
            # reduced costs c_j - c_B B^-1 A_j
            cb = [cost[b] for b in self.basis]
            enter = None
            for j in range(allowed):
                if j in self.basis:
                    continue
                red = cost[j] - sum((c * row[j] for c, row in zip(cb, self.rows) if c and row[j]), mpq(0))
                if red < 0:
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            leave, best = None, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, enter)


def solve_lp(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence, maximize: bool = False) -> LPResult:
    """Optimize ``c . x`` subject to ``A_eq x = b_eq`` and ``x >= 0``.

    Parameters
    ----------
    c : sequence of rationals, length n
    A_eq : m rows of length n
    b_eq : length m
    maximize : bool
        Maximize instead of minimize.

    Returns
    -------
    LPResult
        ``status`` is ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    """
    m = len(A_eq)
    n = len(c)
    cost = [to_mpq(v) for v in c]
    if maximize:
        cost = [-v for v in cost]
    rows, rhs = [], []
    for i in range(m):
        row = [to_mpq(v) for v in A_eq[i]]
        if len(row) != n:
            raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        bi = to_mpq(b_eq[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        # artificial columns n..n+m-1
        art = [mpq(0)] * m
        art[i] = mpq(1)
        rows.append(row + art)
        rhs.append(bi)
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])

    phase1 = [mpq(0)] * n + [mpq(1)] * m
    tab.run(phase1, n + m)
    infeas = sum((r for r, b in zip(tab.rhs, tab.basis) if b >= n), mpq(0))
    if infeas > 0:
        return LPResult(INFEASIBLE)

    # drive remaining (zero-valued) artificials out of the basis
    keep = []
    for i in range(len(tab.rows)):
        if tab.basis[i] < n:
            keep.append(i)
            continue
        j = next((j for j in range(n) if tab.rows[i][j] != 0), None)
        if j is None:
            continue  # redundant equation
        tab.pivot(i, j)
        keep.append(i)
    tab.rows = [tab.rows[i][:n] for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    status = tab.run(cost, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [mpq(0)] * n
    for r, b in zip(tab.rhs, tab.basis):
        x[b] = r
    value = sum((ci * xi for ci, xi in zip(cost, x) if xi), mpq(0))
    if maximize:
        value = -value
    return LPResult(OPTIMAL, [to_fraction(v) for v in x], to_fraction(value))
