"""Finite subsets of an ordinal segment.

A finite set is represented as a strictly increasing tuple of naturals
(``FinSet``).  Every construction in this package only depends on the order
type of the sets involved, so the naturals stand in for arbitrary ordinals.
"""

from __future__ import annotations

import itertools
from typing import Iterable, NamedTuple, Sequence

FinSet = tuple  # strictly increasing tuple of ints


def finset(elements: Iterable[int] = ()) -> FinSet:
    """Normalize an iterable of naturals into a FinSet."""
    out = tuple(sorted(set(int(e) for e in elements)))
    if out and out[0] < 0:
        raise ValueError(f"negative element in {out}")
    return out


def is_finset(s) -> bool:
    return isinstance(s, tuple) and all(a < b for a, b in zip(s, s[1:]))


def less(s: Sequence[int], t: Sequence[int]) -> bool:
    """``s < t``: every element of s is below every element of t (vacuous for empty sets)."""
    if not s or not t:
        return True
    return s[-1] < t[0]


def is_initial_segment(a: Sequence[int], b: Sequence[int]) -> bool:
    """``a ⊑ b``: a ⊆ b and a < b \\ a.  The empty set is initial in everything."""
    return tuple(b[: len(a)]) == tuple(a)


def intersection(s: Sequence[int], t: Sequence[int]) -> FinSet:
    ts = set(t)
    return tuple(x for x in s if x in ts)


def is_block(seq: Sequence[Sequence[int]]) -> bool:
    """True iff all terms are nonempty and consecutive terms satisfy max < min."""
    for term in seq:
        if len(term) == 0:
            return False
    return all(a[-1] < b[0] for a, b in zip(seq, seq[1:]))


def block_union(seq: Iterable[Sequence[int]]) -> FinSet:
    return tuple(itertools.chain.from_iterable(seq))


class DeltaWitness(NamedTuple):
    root: FinSet  # I
    tail: FinSet  # J


def n_delta_position(s: Sequence[int], t: Sequence[int], n: int) -> DeltaWitness | None:
    """Witness (I, J) that s and t are in n-Δ-position, or None.

    I must be an initial part of s∩t, so the candidates are the prefixes of
    s∩t; the longest valid prefix is returned.
    """
    common = intersection(s, t)
    for k in range(len(common), -1, -1):
        root, tail = common[:k], common[k:]
        if len(tail) > n:
            break
        if is_initial_segment(root, s) and is_initial_segment(root, t):
            return DeltaWitness(root, tail)
    return None


def min_delta_k(s: Sequence[int], t: Sequence[int]) -> int:
    """Least k such that s and t are in k-Δ-position (always ≤ |s∩t|)."""
    common = intersection(s, t)
    for k in range(len(common), -1, -1):
        if is_initial_segment(common[:k], s) and is_initial_segment(common[:k], t):
            return len(common) - k
    raise AssertionError("unreachable: the empty root always works")


def theta_map(a: Sequence[int], b: Sequence[int]) -> dict[int, int]:
    """The order-preserving bijection ϑ_{a,b} as an explicit dict."""
    if len(a) != len(b):
        raise ValueError(f"size mismatch: |a|={len(a)} but |b|={len(b)}")
    return dict(zip(a, b))


def positions(s: Sequence[int], idx: Iterable[int]) -> FinSet:
    """``s[I]``: the elements of s sitting at the positions in I."""
    return tuple(s[i] for i in sorted(idx))


def shift_related(s: Sequence[int], t: Sequence[int]) -> bool:
    """``(s, t) ∈ Sf``: s without its minimum is an initial segment of t."""
    if len(s) == 0:
        raise ValueError("shift relation needs a nonempty first argument")
    return is_initial_segment(s[1:], t)


def subsets(s: Sequence[int], k: int | None = None):
    """All subsets of s (of size k if given) as FinSets, by size then lexicographically."""
    sizes = range(len(s) + 1) if k is None else (k,)
    for r in sizes:
        yield from itertools.combinations(tuple(s), r)


def colex_combinations(m: int, k: int):
    """k-subsets of range(m) in colexicographic order."""
    return sorted(itertools.combinations(range(m), k), key=lambda c: c[::-1])


# -- Δ-systems -------------------------------------------------------------

def _max_packing(petals: list[tuple[int, frozenset]], exhaustive: bool) -> list[int]:
    """Largest set of pairwise disjoint petals (indices returned sorted)."""
    if not exhaustive:
        chosen, used = [], set()
        for idx, p in sorted(petals, key=lambda ip: (len(ip[1]), ip[0])):
            if used.isdisjoint(p):
                chosen.append(idx)
                used |= p
        return sorted(chosen)

    best: list[int] = []
    order = sorted(petals, key=lambda ip: ip[0])

    def extend(i: int, chosen: list[int], used: frozenset):
        nonlocal best
        if len(chosen) + (len(order) - i) <= len(best):
            return
        if i == len(order):
            best = list(chosen)
            return
        idx, p = order[i]
        if used.isdisjoint(p):
            chosen.append(idx)
            extend(i + 1, chosen, used | p)
            chosen.pop()
        extend(i + 1, chosen, used)

    extend(0, [], frozenset())
    return sorted(best)


def delta_system_extract(sets: Sequence[Sequence[int]], exhaustive_limit: int = 20):
    """A root r and a longest subsequence whose pairwise intersections all equal r.

    Candidate roots are the pairwise intersections of the list; for each root
    the problem is a maximum packing of the petals s \\ r, solved exhaustively
    when the list has at most ``exhaustive_limit`` entries and greedily
    otherwise.  Ties go to the lexicographically smallest root, then the
    lexicographically smallest index list.
    """
    if len(sets) == 0:
        raise ValueError("delta_system_extract needs a nonempty list")
    sets = [tuple(s) for s in sets]
    exhaustive = len(sets) <= exhaustive_limit
    best_root: FinSet = sets[0]
    best_idx: list[int] = [0]
    roots = sorted({intersection(a, b) for a, b in itertools.combinations(sets, 2)})
    for root in roots:
        rset = set(root)
        petals = [(i, frozenset(s) - rset) for i, s in enumerate(sets) if rset.issubset(s)]
        idx = _max_packing(petals, exhaustive)
        if len(idx) > len(best_idx) or (len(idx) == len(best_idx) and len(idx) > 1
                                        and (len(best_idx) == 1 or (root, idx) < (best_root, best_idx))):
            best_root, best_idx = root, idx
    return best_root, best_idx
