"""Tsirelson-type norms over a hereditary family.

``‖x‖ = max(‖x‖_∞, sup θ·Σ‖E_i x‖)`` where the sup runs over block sequences
``E_0 < … < E_{d-1}`` admitting a member ``{γ_i}`` of the family with
``γ_0 ≤ min E_0`` and ``max E_{i-1} < γ_i ≤ min E_i``.

The norm is 1-unconditional, so each E_i may be taken to be a run of
consecutive support points and signs can be dropped.  A one-block sequence
contributes at most θ‖x‖ < ‖x‖, so the norm of an interval of the support only
depends on norms of strictly shorter intervals; :func:`t_norm` evaluates this
recursion exactly, by interval length.  :func:`t_norm_iterates` runs the plain
value iteration from ‖·‖_∞ instead and reports how many rounds it needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import families as fam
from .qvector import QVector, support


class IterationCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TNormInstance:
    theta: Fraction
    family: object
    ground: int | None = None

    def __post_init__(self):
        th = Fraction(self.theta)
        object.__setattr__(self, "theta", th)
        if not 0 < th < 1:
            raise ValueError(f"theta must lie in (0, 1), got {th}")
        if not fam.is_hereditary(self.family):
            raise ValueError("the family must be hereditary")


def admissible(blocks: Sequence[Sequence[int]], inst: TNormInstance | object):
    """A witness ``(γ_i)`` for the block sequence, or None."""
    f = inst.family if isinstance(inst, TNormInstance) else inst
    blocks = [tuple(sorted(b)) for b in blocks]
    if any(not b for b in blocks) or any(a[-1] >= b[0] for a, b in zip(blocks, blocks[1:])):
        raise ValueError("not a block sequence")
    g = fam.PrefixTracker(f)

    def rec(i: int, res, chosen: tuple):
        if i == len(blocks):
            return chosen
        lo = blocks[i - 1][-1] if i else -1
        for c in g.candidates(lo, blocks[i][0]):
            r = g.step(res, c)
            if r is not False:
                out = rec(i + 1, r, chosen + (c,))
                if out is not None:
                    return out
        return None

    return rec(0, g.init, ())


# -- the norm ---------------------------------------------------------------------


def _interval_norms(pts: Sequence[int], vals: Sequence[Fraction], theta: Fraction, f) -> list[list]:
    """norm[a][b] for the restriction of x to support positions a..b."""
    L = len(pts)
    g = fam.PrefixTracker(f)
    norm = [[None] * L for _ in range(L)]
    maxabs = [[None] * L for _ in range(L)]
    for a in range(L):
        m = Fraction(0)
        for b in range(a, L):
            m = max(m, vals[b])
            maxabs[a][b] = m

    for b in range(L):
        memo: dict = {}

        def best(j: int, lo: int, res) -> Fraction:
            """Largest Σ‖E_i x‖ over admissible blocks inside positions j..b."""
            if j > b:
                return Fraction(0)
            key = (j, lo if not g.spreading else None, res)
            hit = memo.get(key)
            if hit is not None:
                return hit
            out = best(j + 1, lo, res)
            lo_val = pts[lo] if lo >= 0 else -1
            for c in g.candidates(lo_val, pts[j]):
                r = g.step(res, c)
                if r is False:
                    continue
                for e in range(j, b + 1):
                    out = max(out, norm[j][e] + best(e + 1, e, r))
            memo[key] = out
            return out

        for a in range(b, -1, -1):
            seq = best(a + 1, -1, g.init)
            for c in g.candidates(-1, pts[a]):
                r = g.step(g.init, c)
                if r is False:
                    continue
                for e in range(a, b):
                    seq = max(seq, norm[a][e] + best(e + 1, e, r))
            norm[a][b] = max(maxabs[a][b], theta * seq)
    return norm


def t_norm(x: QVector, inst: TNormInstance) -> Fraction:
    pts = support(x)
    if not pts:
        return Fraction(0)
    _check_ground(pts, inst)
    vals = [abs(Fraction(x[p])) for p in pts]
    return _interval_norms(pts, vals, inst.theta, inst.family)[0][-1]


def _check_ground(pts, inst):
    if inst.ground is not None and pts[-1] >= inst.ground:
        raise ValueError(f"support point {pts[-1]} outside the ground segment of size {inst.ground}")


def t_norm_iterates(x: QVector, inst: TNormInstance, cap: int | None = None) -> tuple[Fraction, int]:
    """Value iteration from the sup norm over all interval restrictions.

    Returns ``(norm, rounds)`` where ``rounds`` counts the updates until two
    successive iterates agree everywhere.  Raises once ``cap`` rounds
    (default |supp x| + 2) pass without stabilizing.
    """
    pts = support(x)
    if not pts:
        return Fraction(0), 0
    _check_ground(pts, inst)
    L = len(pts)
    cap = L + 2 if cap is None else cap
    vals = [abs(Fraction(x[p])) for p in pts]
    g = fam.PrefixTracker(inst.family)
    cur = {(a, b): max(vals[a:b + 1]) for a in range(L) for b in range(a, L)}
    for rounds in range(1, cap + 1):
        nxt = {}
        for a, b in cur:
            nxt[a, b] = max(max(vals[a:b + 1]), inst.theta * _best_blocks(pts, a, b, cur, g))
        if nxt == cur:
            return cur[0, L - 1], rounds
        cur = nxt
    raise IterationCapExceeded(f"value iteration did not stabilize within {cap} rounds")


def _best_blocks(pts, a, b, cur, g) -> Fraction:
    @lru_cache(maxsize=None)
    def best(j: int, lo: int, res) -> Fraction:
        if j > b:
            return Fraction(0)
        out = best(j + 1, lo, res)
        lo_val = pts[lo] if lo >= 0 else -1
        for c in g.candidates(lo_val, pts[j]):
            r = g.step(res, c)
            if r is False:
                continue
            for e in range(j, b + 1):
                out = max(out, cur[j, e] + best(e + 1, e, r))
        return out

    return best(a, -1, g.init)


# -- consequences ------------------------------------------------------------------


def projection_check(x: QVector, inst: TNormInstance, gamma_set: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Norm of x over the family and over its projection onto Γ ⊇ supp x."""
    gamma = tuple(sorted(gamma_set))
    if not set(support(x)) <= set(gamma):
        raise ValueError("support of x must lie inside Γ")
    lhs = t_norm(x, inst)
    rhs = t_norm(x, TNormInstance(inst.theta, fam.Projection(inst.family, gamma), inst.ground))
    return lhs, rhs


@dataclass
class BellenotRow:
    m: int
    norm: Fraction
    p_hat: float | None


def bellenot_profile(theta, n: int, m_max: int) -> list[BellenotRow]:
    """Norms of u_0 + … + u_{m-1} over Cube(n), m = 1..m_max, with p̂(m) = log m / log‖·‖."""
    theta = Fraction(theta)
    pts = tuple(range(m_max))
    norm = _interval_norms(pts, [Fraction(1)] * m_max, theta, fam.Cube(n))
    rows = []
    for m in range(1, m_max + 1):
        v = norm[0][m - 1]
        p = math.log(m) / math.log(v) if v > 1 else None
        rows.append(BellenotRow(m, v, p))
    return rows


def bellenot_exponent(theta, n: int) -> float | None:
    """The limiting exponent log n / (log n + log θ), or None in the c₀ regime θn ≤ 1."""
    theta = Fraction(theta)
    if theta * n <= 1:
        return None
    return math.log(n) / (math.log(n) + math.log(theta))


def l1_lower_bound_holds(x: QVector, inst: TNormInstance) -> bool:
    """‖x‖ ≥ θ·Σ|x_γ| (meaningful when every block sequence in supp x is admissible)."""
    total = sum((abs(v) for v in x.values()), Fraction(0))
    return t_norm(x, inst) >= inst.theta * total
