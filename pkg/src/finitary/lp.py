"""Exact rational simplex for small linear programs.

Solves ``min c·x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``
with :class:`fractions.Fraction` arithmetic, two phases, Bland's rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Infeasible(ValueError):
    pass


class Unbounded(ValueError):
    pass


@dataclass
class LPResult:
    x: list[Fraction]
    value: Fraction


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        inv = 1 / p
        T[r] = row = [v * inv for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
    basis[r] = c


def _run(T, basis, cost_row: int, allowed: int) -> None:
    """Minimize the objective in row ``cost_row`` (stored as reduced costs)."""
    m = cost_row
    while True:
        obj = T[cost_row]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise Unbounded("objective is unbounded below")
        _pivot(T, basis, best[1], enter)


def linprog_exact(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                  A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    F = Fraction
    n = len(c)
    rows = [([F(v) for v in a], F(b), True) for a, b in zip(A_ub, b_ub)]
    rows += [([F(v) for v in a], F(b), False) for a, b in zip(A_eq, b_eq)]
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    # columns: x (n) | slacks | artificials (m) | rhs
    width = n + n_slack + m
    T: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (a, b, ub) in enumerate(rows):
        row = a + [F(0)] * (n_slack + m) + [b]
        if ub:
            row[n + s] = F(1)
            s += 1
        if b < 0:
            row = [-v for v in row]
        row[n + n_slack + i] = F(1)
        T.append(row)
        basis.append(n + n_slack + i)

    # phase 1: minimize the sum of artificials
    phase1 = [F(0)] * (width + 1)
    for row in T:
        phase1 = [p - v for p, v in zip(phase1, row)]
    for i in range(m):
        phase1[n + n_slack + i] = F(0)
    T.append(phase1)
    _run(T, basis, m, n + n_slack)
    if T[m][-1] != 0:
        raise Infeasible("constraints admit no nonnegative solution")
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= n + n_slack:
            j = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, basis, i, j)
    T.pop()

    # phase 2
    obj = [F(v) for v in c] + [F(0)] * (n_slack + m) + [F(0)]
    for i in range(m):
        cb = obj[basis[i]]
        if cb:
            obj = [o - cb * v for o, v in zip(obj, T[i])]
    T.append(obj)
    _run(T, basis, m, n + n_slack)
    x = [F(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    value = sum((F(ci) * xi for ci, xi in zip(c, x)), F(0))
    return LPResult(x, value)
