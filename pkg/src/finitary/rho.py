"""Finite ρ-function tables.

A ``RhoTable`` assigns a colour ``ρ(α, β) < M`` to every pair ``α < β < N``.
It is *valid* when

* (a.1)  ρ(α, β) ≤ max{ρ(α, γ), ρ(β, γ)}
* (a.2)  ρ(α, γ) ≤ max{ρ(α, β), ρ(β, γ)}
* (b)    ρ(α, β) ≠ ρ(ᾱ, β)  for α ≠ ᾱ < β
* (c)    ρ(α, β) ≠ ρ(β, γ)

for all α < β < γ < N.  Property (b) forces ``M ≥ N − 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from ._rng import as_rng


@dataclass(frozen=True)
class RhoTable:
    N: int
    values: dict = field(hash=False, compare=True)  # (alpha, beta) -> colour
    range_size: int = 0

    def __post_init__(self):
        if self.range_size == 0 and self.values:
            object.__setattr__(self, "range_size", max(self.values.values()) + 1)

    def __call__(self, a: int, b: int) -> int:
        if a == b:
            raise ValueError(f"ρ is undefined on the diagonal pair ({a}, {a})")
        if a > b:
            a, b = b, a
        try:
            return self.values[a, b]
        except KeyError:
            raise ValueError(f"pair ({a}, {b}) outside the table domain N={self.N}") from None

    def column(self, beta: int) -> list[int]:
        return [self.values[a, beta] for a in range(beta)]

    def restrict(self, points: Sequence[int]) -> "RhoTable":
        """Restriction to ``points`` re-indexed onto 0..len(points)-1 (colours unchanged)."""
        pts = sorted(points)
        vals = {(i, j): self.values[pts[i], pts[j]]
                for j in range(len(pts)) for i in range(j)}
        return RhoTable(len(pts), vals, self.range_size)

    def to_json(self) -> str:
        rows = [[a, b, c] for (a, b), c in sorted(self.values.items())]
        return json.dumps({"N": self.N, "values": rows})

    @classmethod
    def from_json(cls, text: str) -> "RhoTable":
        data = json.loads(text)
        vals = {(int(a), int(b)): int(c) for a, b, c in data["values"]}
        for a, b in vals:
            if not 0 <= a < b < data["N"]:
                raise ValueError(f"bad pair ({a}, {b}) for N={data['N']}")
        return cls(int(data["N"]), vals)

    @classmethod
    def from_function(cls, N: int, fn, range_size: int = 0) -> "RhoTable":
        vals = {(a, b): int(fn(a, b)) for b in range(N) for a in range(b)}
        return cls(N, vals, range_size)


class Violation(NamedTuple):
    kind: str          # "a.1", "a.2", "b" or "c"
    where: tuple       # the offending triple (or pair of pairs)


def verify_rho(t: RhoTable) -> list[Violation]:
    """Every violated instance of (a.1), (a.2), (b), (c); empty iff the table is valid."""
    N, v = t.N, t.values
    out: list[Violation] = []
    # (b): columns are injective
    for beta in range(N):
        seen: dict[int, int] = {}
        for a in range(beta):
            c = v[a, beta]
            if c in seen:
                out.append(Violation("b", (seen[c], a, beta)))
            else:
                seen[c] = a
    # (c): the column of β and the row of β are disjoint
    for beta in range(N):
        col = {}
        for a in range(beta):
            col.setdefault(v[a, beta], a)
        for g in range(beta + 1, N):
            c = v[beta, g]
            if c in col:
                out.append(Violation("c", (col[c], beta, g)))
    # (a.1), (a.2)
    for g in range(N):
        for b in range(g):
            for a in range(b):
                ab, ag, bg = v[a, b], v[a, g], v[b, g]
                if ab > max(ag, bg):
                    out.append(Violation("a.1", (a, b, g)))
                if ag > max(ab, bg):
                    out.append(Violation("a.2", (a, b, g)))
    return out


def is_valid(t: RhoTable) -> bool:
    return not verify_rho(t)


def _search(N: int, M: int, order: np.ndarray | None) -> dict | None:
    """Depth-first search in (β, α) order; ``order[cell]`` permutes the colour order."""
    cells = [(a, b) for b in range(1, N) for a in range(b)]
    vals: dict = {}
    cols = [set() for _ in range(N)]  # colours used in column β

    def candidates(x: int, g: int):
        lo = 0
        for a in range(x):
            ax, ag = vals[a, x], vals[a, g]
            if ax != ag:
                lo = max(lo, ax, ag)
        banned = cols[g] | cols[x]
        return [c for c in range(lo, M) if c not in banned]

    def rec(k: int) -> bool:
        if k == len(cells):
            return True
        x, g = cells[k]
        # column g still needs g - x distinct colours, x..g-1 inclusive
        if M - len(cols[g]) < g - x:
            return False
        cand = candidates(x, g)
        if order is not None:
            cand.sort(key=lambda c: order[k, c])
        for c in cand:
            vals[x, g] = c
            cols[g].add(c)
            if rec(k + 1):
                return True
            cols[g].discard(c)
            del vals[x, g]
        return False

    return dict(vals) if rec(0) else None


def synthesize_rho(N: int, M_max: int, rng=None) -> RhoTable | None:
    """Smallest-range valid table on N points with at most ``M_max`` colours, or None.

    Without ``rng`` the search is the deterministic minimal-colour-first
    backtracking; with ``rng`` the colour order of each cell is shuffled.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if N == 1:
        return RhoTable(1, {}, 1) if M_max >= 1 else None
    gen = as_rng(rng) if rng is not None else None
    ncells = N * (N - 1) // 2
    for M in range(max(1, N - 1), M_max + 1):
        order = gen.random((ncells, M)) if gen is not None else None
        vals = _search(N, M, order)
        if vals is not None:
            return RhoTable(N, vals, M)
    return None


@dataclass(frozen=True)
class RhoStack:
    n: int
    tables: tuple
    ground_size: int

    def level(self, i: int) -> RhoTable:
        """The table feeding f_i (1 ≤ i ≤ n)."""
        return self.tables[i - 1]


class StackError(RuntimeError):
    pass


def build_stack(n: int, ground_size: int, rng=None, slack: int = 0) -> RhoStack:
    """n tables, table i living on the colour set of table i-1.

    ``slack`` extra colours are allowed per level on top of the minimal range.
    """
    if n < 1:
        raise ValueError("stack depth must be at least 1")
    gen = as_rng(rng) if rng is not None else None
    tables = []
    N = ground_size
    for level in range(1, n + 1):
        lo = max(1, N - 1)
        t = synthesize_rho(N, lo + slack, gen)
        if t is None:
            raise StackError(f"synthesis failed at level {level} (N={N})")
        tables.append(t)
        N = t.range_size
    return RhoStack(n, tuple(tables), ground_size)
