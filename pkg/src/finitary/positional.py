"""Positional graphs, the f_i recursion over a ρ-stack, and good-colouring audits."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

from .finsets import (FinSet, colex_combinations, is_block, min_delta_k,
                      n_delta_position, positions, subsets)
from .rho import RhoStack

# -- injective codes of finite sequences of naturals ------------------------


def seq_code(seq: Sequence[int]) -> int:
    """Bijection from finite sequences of naturals onto the naturals.

    ``() -> 0`` and ``(a,) + rest -> 2**a * (2*code(rest) + 1)``.
    """
    code = 0
    for a in reversed(tuple(seq)):
        if a < 0:
            raise ValueError("sequence entries must be naturals")
        code = (2 * code + 1) << a
    return code


def seq_decode(code: int) -> tuple[int, ...]:
    out = []
    while code:
        a = (code & -code).bit_length() - 1
        out.append(a)
        code = ((code >> a) - 1) // 2
    return tuple(out)


def gcard_color(blocks: Sequence[Sequence[int]]) -> int:
    """Colour of a block sequence determined by its cardinality profile."""
    if not is_block(blocks) and len(blocks) > 0:
        raise ValueError(f"not a block sequence: {blocks}")
    return seq_code(len(b) for b in blocks)


# -- the f_i recursion -------------------------------------------------------


@dataclass
class FiTable:
    """Memoized evaluation of f_0 = Id, f_i(α_0..α_i) = ρ_i(f_{i-1}(α_0..α_{i-1}), f_{i-1}(α_1..α_i)).

    ``ρ_i`` is ``stack.tables[i-1]``.  ρ is read on unordered pairs; when the two
    arguments coincide the value is undefined and ``None`` is returned.
    """

    stack: RhoStack
    memo: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.stack.n

    def __call__(self, i: int, tup: Sequence[int]):
        return f_eval(self, i, tup)


def f_eval(t: FiTable, i: int, tup: Sequence[int]):
    tup = tuple(tup)
    if len(tup) != i + 1:
        raise ValueError(f"f_{i} takes {i + 1} arguments, got {len(tup)}")
    if i > t.stack.n:
        raise ValueError(f"stack has depth {t.stack.n}, cannot evaluate f_{i}")
    if i == 0:
        if not 0 <= tup[0] < t.stack.ground_size:
            raise ValueError(f"{tup[0]} outside the ground segment of size {t.stack.ground_size}")
        return tup[0]
    key = (i, tup)
    if key in t.memo:
        return t.memo[key]
    left = f_eval(t, i - 1, tup[:-1])
    right = f_eval(t, i - 1, tup[1:])
    table = t.stack.tables[i - 1]
    if left is None or right is None or left == right:
        val = None
    else:
        if max(left, right) >= table.N:
            raise ValueError(
                f"f_{i - 1} value {max(left, right)} outside the level-{i} table domain N={table.N}")
        val = table(left, right)
    t.memo[key] = val
    return val


def shift_coloring(t: FiTable, tup: Sequence[int]) -> tuple[int, ...]:
    """Colour of an (n+2)-tuple: entry i is 0/1/2 as f_i(α_0..α_i) is <, =, > f_i(α_1..α_{i+1}).

    Undefined values compare as ``1``.
    """
    n = t.n
    if len(tup) != n + 2:
        raise ValueError(f"expected {n + 2} ordinals")
    out = []
    for i in range(n + 1):
        a = f_eval(t, i, tup[: i + 1])
        b = f_eval(t, i, tup[1: i + 2])
        if a is None or b is None or a == b:
            out.append(1)
        else:
            out.append(0 if a < b else 2)
    return tuple(out)


def _shift_ok(t: FiTable, i: int, w: tuple, e: int) -> bool:
    """f_i(w) < f_i(w[1:] + (e,)) for an (i+1)-tuple w below e."""
    a = f_eval(t, i, w)
    b = f_eval(t, i, w[1:] + (e,))
    return a is not None and b is not None and a < b


def is_shift_increasing(t: FiTable, s: Sequence[int], levels: Iterable[int]) -> bool:
    s = tuple(s)
    for i in levels:
        for u in itertools.combinations(s, i + 2):
            if not _shift_ok(t, i, u[:-1], u[-1]):
                return False
    return True


def is_min_dependent(t: FiTable, s: Sequence[int], i: int) -> bool:
    seen: dict = {}
    for u in itertools.combinations(tuple(s), i + 1):
        v = f_eval(t, i, u)
        if v is None:
            return False
        if seen.setdefault(v, u[0]) != u[0]:
            return False
    return True


def _extract(a: Sequence[int], t: FiTable, size: int, min_dep: bool) -> FinSet | None:
    a = tuple(sorted(a))
    n = t.n
    chosen: list[int] = []
    # per level: value -> (min, multiplicity) for min-dependence bookkeeping
    tables: list[dict] = [dict() for _ in range(n + 1)]

    def admissible(e: int, undo: list) -> bool:
        b = tuple(chosen)
        for i in range(n + 1):
            if len(b) >= i + 1:
                for w in itertools.combinations(b, i + 1):
                    if not _shift_ok(t, i, w, e):
                        return False
            if min_dep and len(b) >= i:
                for w in itertools.combinations(b, i):
                    u = w + (e,)
                    v = f_eval(t, i, u)
                    if v is None:
                        return False
                    m = u[0]
                    seen = tables[i].get(v)
                    if seen is not None and seen != m:
                        return False
                    if seen is None:
                        tables[i][v] = m
                        undo.append((i, v))
        return True

    def rec(start: int) -> bool:
        if len(chosen) == size:
            return True
        for k in range(start, len(a) - (size - len(chosen)) + 1):
            e = a[k]
            undo: list = []
            if admissible(e, undo):
                chosen.append(e)
                if rec(k + 1):
                    return True
                chosen.pop()
            for i, v in undo:
                del tables[i][v]
        return False

    return tuple(chosen) if rec(0) else None


def shift_increasing_subset(a: Sequence[int], t: FiTable, size: int) -> FinSet | None:
    """A ``size``-subset of a on which every f_i (i ≤ n) is shift-increasing.

    This is a search for a subset all of whose (n+2)-subsets (and the shorter
    initial configurations) get the all-zero :func:`shift_coloring`.  The search
    is exhaustive, so ``None`` means no such subset exists inside a.
    """
    return _extract(a, t, size, min_dep=False)


def min_dependent_subset(a: Sequence[int], t: FiTable, size: int) -> FinSet | None:
    """A ``size``-subset of a that is shift-increasing and min-dependent for every f_i, i ≤ n."""
    return _extract(a, t, size, min_dep=True)


def bn_member(s: Sequence[int], t: FiTable) -> bool:
    """Membership in B_n: f_i shift-increasing on s for i < n and f_n min-dependent on s."""
    n = t.n
    return is_shift_increasing(t, s, range(n)) and is_min_dependent(t, s, n)


def bn_family(t: FiTable, ground: Sequence[int]) -> list[FinSet]:
    """All members of B_n inside ``ground``, by size then lexicographically.

    Uses heredity of B_n to prune the subset lattice.
    """
    out: list[FinSet] = [()]
    layer = [()]
    ground = tuple(sorted(ground))
    while layer:
        nxt = []
        for s in layer:
            start = ground.index(s[-1]) + 1 if s else 0
            for e in ground[start:]:
                u = s + (e,)
                if bn_member(u, t):
                    nxt.append(u)
        out.extend(nxt)
        layer = nxt
    return out


def cn_color(s: Sequence[int], t: FiTable) -> tuple:
    """``c_n(s) = f_n ∘ ϑ_{|s|,s}``: the f_n table over the (n+1)-position sets of s (colex order).

    The token is ``(|s|, table)``; equal tokens force equal cardinality.
    """
    s = tuple(s)
    n = t.n
    table = tuple(f_eval(t, n, positions(s, p)) for p in colex_combinations(len(s), n + 1))
    return (len(s), table)


def encode_token(token) -> int:
    """Injective map of a c_n token (or any nested tuple of naturals) to a natural."""
    size, table = token
    if any(v is None for v in table):
        raise ValueError("token contains undefined f_n values")
    return seq_code((size,) + tuple(table))


# -- audits ------------------------------------------------------------------


@dataclass
class ColoredGraphSample:
    vertices: list
    n: int
    colors: dict  # vertex -> hashable colour token


class AuditEntry(NamedTuple):
    s: tuple
    t: tuple
    color: Hashable
    witness_k: int | None


def not_in_delta_position(n: int) -> Callable[[Sequence[int], Sequence[int]], bool]:
    """Edge relation E_pos of G_n."""
    return lambda s, t: n_delta_position(s, t, n) is None


def card_profile_differs(b1, b2) -> bool:
    """Edge relation E_card on block sequences."""
    return [len(x) for x in b1] != [len(x) for x in b2]


def good_coloring_audit(sample: ColoredGraphSample, edge) -> list[AuditEntry]:
    """All pairs s ≠ t with equal colours joined by an edge (empty iff the colouring is good)."""
    groups = defaultdict(list)
    for v in sample.vertices:
        groups[sample.colors[v]].append(v)
    out = []
    for color, vs in groups.items():
        for s, t in itertools.combinations(vs, 2):
            if s != t and edge(s, t):
                k = min_delta_k(s, t) if _is_set(s) and _is_set(t) else None
                out.append(AuditEntry(s, t, color, k))
    return out


def _is_set(v) -> bool:
    return isinstance(v, tuple) and all(isinstance(x, int) for x in v)


def equal_color_delta_profile(sample: ColoredGraphSample) -> int:
    """Largest minimal Δ-parameter over pairs of distinct same-coloured vertices (-1 if none)."""
    groups = defaultdict(list)
    for v in sample.vertices:
        groups[sample.colors[v]].append(v)
    worst = -1
    for vs in groups.values():
        for s, t in itertools.combinations(vs, 2):
            worst = max(worst, min_delta_k(s, t))
    return worst


def cn_sample(t: FiTable, ground: Sequence[int]) -> ColoredGraphSample:
    """All B_n members inside ``ground`` coloured by c_n."""
    members = bn_family(t, ground)
    return ColoredGraphSample(members, t.n, {s: cn_color(s, t) for s in members})


def proposition_check(t: FiTable, ground: Sequence[int]) -> list[tuple]:
    """Counterexamples to: f_i(α, ᾱs) = f_i(ᾱ, ᾱs) and lower levels below the shift ⇒ α = ᾱ.

    Exhaustive over i ≤ n, α, ᾱ < α_0 < … < α_{i-1} in ``ground``.
    """
    ground = tuple(sorted(ground))
    bad = []
    for i in range(1, t.n + 1):
        for tail in itertools.combinations(ground, i):
            below = [g for g in ground if g < tail[0]]
            for a, abar in itertools.combinations(below, 2):
                if not all(_hyp_b(t, j, x, tail) for j in range(i) for x in (a, abar)):
                    continue
                if f_eval(t, i, (a,) + tail) == f_eval(t, i, (abar,) + tail):
                    bad.append((i, a, abar, tail))
    return bad


def _hyp_b(t: FiTable, j: int, x: int, tail: tuple) -> bool:
    lo = f_eval(t, j, (x,) + tail[:j])
    hi = f_eval(t, j, tail[: j + 1])
    return lo is not None and hi is not None and lo < hi


def all_subsets(ground: Sequence[int]):
    return list(subsets(tuple(sorted(ground))))
