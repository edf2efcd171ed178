"""Hereditary families of finite sets.

Families are described by small immutable descriptors and queried through
:func:`member`.  Ground elements are naturals; the Schreier family uses the
convention ``{∅} ∪ {s : |s| ≤ min s}``, so 0 never occurs in a nonempty
Schreier set.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .lp import linprog_exact
from .ordinals import OMEGA, CnfOrdinal
from .qvector import QVector, support

FinSet = tuple


class FamilyError(ValueError):
    pass


# -- descriptors ---------------------------------------------------------------


@dataclass(frozen=True)
class Explicit:
    sets: frozenset

    def __init__(self, sets: Iterable[Sequence[int]], check: bool = True):
        fs = frozenset(tuple(sorted(s)) for s in sets)
        if check:
            for s in fs:
                for i in range(len(s)):
                    if s[:i] + s[i + 1:] not in fs:
                        raise FamilyError(f"explicit list is not hereditary: {s} present, "
                                          f"{s[:i] + s[i + 1:]} missing")
        object.__setattr__(self, "sets", fs)

    def sorted_sets(self) -> list[FinSet]:
        return sorted(self.sets, key=lambda s: (len(s), s))


@dataclass(frozen=True)
class Cube:
    n: int


@dataclass(frozen=True)
class Schreier:
    pass


@dataclass(frozen=True)
class Product:
    """Unions of block sequences of left-members whose minima form a right-member."""
    left: object
    right: object


@dataclass(frozen=True)
class HereditaryProduct:
    """Downward closure of :class:`Product` inside ``range(ground)``."""
    left: object
    right: object
    ground: int


@dataclass(frozen=True)
class Restrict:
    fam: object
    gamma: object  # tuple of naturals or a predicate


@dataclass(frozen=True)
class Projection:
    """Images of members under γ ↦ min{δ ∈ Γ : δ ≥ γ}."""
    fam: object
    gamma: tuple


@dataclass(frozen=True)
class Homogeneous:
    """Sets s with the colouring constant on [s]^i for every i."""
    coloring: Callable = field(compare=False)
    name: str = "c"


def is_hereditary(f) -> bool:
    if isinstance(f, (Explicit, Cube, Schreier, Homogeneous, HereditaryProduct)):
        return True
    if isinstance(f, (Restrict, Projection)):
        return is_hereditary(f.fam)
    if isinstance(f, Product):
        # block decompositions of subsets have larger minima; needs a spreading right factor
        return is_hereditary(f.left) and isinstance(f.right, (Cube, Schreier))
    raise FamilyError(f"unknown descriptor {f!r}")


def is_compact(f) -> bool:
    """Structural compactness flag; every descriptor here is built from compact pieces."""
    if isinstance(f, (Explicit, Cube, Schreier, Homogeneous, HereditaryProduct)):
        return True
    if isinstance(f, (Product,)):
        return is_compact(f.left) and is_compact(f.right)
    if isinstance(f, (Restrict, Projection)):
        return is_compact(f.fam)
    raise FamilyError(f"unknown descriptor {f!r}")


# -- membership ----------------------------------------------------------------


def member(f, s: Sequence[int]) -> bool:
    s = tuple(s)
    if isinstance(f, Schreier):
        return len(s) == 0 or len(s) <= s[0]
    if isinstance(f, Cube):
        return len(s) <= f.n
    if isinstance(f, Explicit):
        return s in f.sets
    if isinstance(f, Restrict):
        g = f.gamma
        inside = all(g(x) for x in s) if callable(g) else set(s) <= set(g)
        return inside and member(f.fam, s)
    if isinstance(f, Product):
        return _product_member(f.left, f.right, s)
    if isinstance(f, HereditaryProduct):
        return _hproduct_member(f, s)
    if isinstance(f, Projection):
        return _projection_member(f, s)
    if isinstance(f, Homogeneous):
        return is_homogeneous(f.coloring, s, len(s))
    raise FamilyError(f"unknown descriptor {f!r}")


def _product_member(left, right, s: tuple) -> bool:
    prune = is_hereditary(right)

    @lru_cache(maxsize=None)
    def rec(start: int, mins: tuple) -> bool:
        if start == len(s):
            return member(right, mins)
        nm = mins + (s[start],)
        if prune and not member(right, nm):
            return False
        for end in range(start + 1, len(s) + 1):
            if member(left, s[start:end]) and rec(end, nm):
                return True
        return False

    return rec(0, ())


def _hproduct_member(f: HereditaryProduct, s: tuple) -> bool:
    if any(x >= f.ground for x in s):
        return False
    rest = [g for g in range(f.ground) if g not in set(s)]
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            if _product_member(f.left, f.right, tuple(sorted(s + extra))):
                return True
    return False


def projection_map(gamma: Sequence[int], x: int) -> int:
    """ϖ_Γ(x) = min{δ ∈ Γ : δ ≥ x}; rejects x above max Γ."""
    for d in gamma:
        if d >= x:
            return d
    raise FamilyError(f"{x} lies above max Γ = {max(gamma)}")


def _projection_member(f: Projection, t: tuple) -> bool:
    gamma = tuple(sorted(f.gamma))
    if not set(t) <= set(gamma):
        return False
    idx = {d: i for i, d in enumerate(gamma)}
    intervals = [range(gamma[idx[d] - 1] + 1 if idx[d] else 0, d + 1) for d in t]
    if is_hereditary(f.fam):
        # one preimage point per element of t is enough
        def rec(i: int, chosen: tuple) -> bool:
            if i == len(t):
                return True
            return any(member(f.fam, chosen + (x,)) and rec(i + 1, chosen + (x,))
                       for x in intervals[i])
        return rec(0, ())
    pools = [tuple(iv) for iv in intervals]
    for parts in itertools.product(*[_nonempty_subsets(p) for p in pools]):
        if member(f.fam, tuple(itertools.chain.from_iterable(parts))):
            return True
    return not t and member(f.fam, ())


def _nonempty_subsets(pool):
    return [c for r in range(1, len(pool) + 1) for c in itertools.combinations(pool, r)]


def is_homogeneous(c: Callable, s: Sequence[int], upto: int) -> bool:
    s = tuple(s)
    for i in range(upto + 1):
        vals = {c(t) for t in itertools.combinations(s, i)}
        if len(vals) > 1:
            return False
    return True


# -- γ bookkeeping ------------------------------------------------------------------
#
# A "residual" summarizes which continuations of a γ-prefix stay in the family.
# For Schreier and Cube the remaining room is a single count and the largest
# allowed γ is always optimal; otherwise the prefix itself is the state.


class PrefixTracker:
    def __init__(self, f):
        self.f = f
        if isinstance(f, Cube):
            self.spreading, self.init = True, f.n
        elif isinstance(f, Schreier):
            self.spreading, self.init = True, None
        else:
            self.spreading, self.init = False, ()
        self._member = lru_cache(maxsize=None)(lambda s: member(f, s))

    def step(self, res, g: int):
        """Residual after appending γ = g, or ``False`` if the prefix leaves the family."""
        f = self.f
        if isinstance(f, Cube):
            return res - 1 if res >= 1 else False
        if isinstance(f, Schreier):
            if res is None:
                return g - 1 if g >= 1 else False
            return res - 1 if res >= 1 else False
        nxt = res + (g,)
        return nxt if self._member(nxt) else False

    def candidates(self, lo: int, hi: int):
        """γ values with lo < γ ≤ hi, best first."""
        if self.spreading:
            return (hi,)
        return range(hi, lo, -1)



# -- enumeration and closure --------------------------------------------------


def members(f, ground: Sequence[int]) -> list[FinSet]:
    """All members inside ``ground``, by size then lexicographically."""
    ground = tuple(sorted(ground))
    if isinstance(f, Explicit):
        gs = set(ground)
        return sorted((s for s in f.sets if set(s) <= gs), key=lambda s: (len(s), s))
    if is_hereditary(f):
        out = []
        layer = [()] if member(f, ()) else []
        while layer:
            out.extend(layer)
            nxt = []
            for s in layer:
                for g in ground:
                    if s and g <= s[-1]:
                        continue
                    u = s + (g,)
                    if member(f, u):
                        nxt.append(u)
            layer = nxt
        return out
    return [s for r in range(len(ground) + 1) for s in itertools.combinations(ground, r)
            if member(f, s)]


def maximal_members(f, ground: Sequence[int]) -> list[FinSet]:
    ms = members(f, ground)
    if is_hereditary(f):
        covered = set()
        for u in ms:
            for i in range(len(u)):
                covered.add(u[:i] + u[i + 1:])
        return [s for s in ms if s not in covered]
    ground = tuple(sorted(ground))
    out = []
    for s in ms:
        ss = set(s)
        if not any(g not in ss and member(f, tuple(sorted(s + (g,)))) for g in ground):
            out.append(s)
    return out


def hereditary_closure(sets: Iterable[Sequence[int]]) -> Explicit:
    out = set()
    for s in sets:
        s = tuple(sorted(s))
        for r in range(len(s) + 1):
            out.update(itertools.combinations(s, r))
    return Explicit(out, check=False)


def is_large_window(f, a: Sequence[int], n: int) -> bool:
    """Does f contain an n-subset of a."""
    a = tuple(sorted(a))
    if n > len(a):
        return False
    if isinstance(f, Schreier):
        return n == 0 or len(a[-n:]) <= a[-n]
    if isinstance(f, Cube):
        return n <= f.n
    return any(member(f, s) for s in itertools.combinations(a, n))


# -- Cantor-Bendixson rank --------------------------------------------------------


def derivative_rank(sets: Iterable[Sequence[int]], threshold: int = 1) -> int:
    """Rank of a finite hereditary list under the threshold derivative.

    A set survives one derivative step when it has at least ``threshold``
    one-point extensions among the survivors; the rank is the last step with a
    nonempty survivor set.
    """
    level = {tuple(sorted(s)) for s in sets}
    if not level:
        raise FamilyError("the empty family has no Cantor-Bendixson rank")
    rank = 0
    while True:
        ext = {s: 0 for s in level}
        for u in level:
            for i in range(len(u)):
                sub = u[:i] + u[i + 1:]
                if sub in ext:
                    ext[sub] += 1
        nxt = {s for s, k in ext.items() if k >= threshold}
        if not nxt:
            return rank
        level = nxt
        rank += 1


def cb_rank(f, ground: Sequence[int] | None = None, threshold: int = 1) -> CnfOrdinal:
    """Cantor-Bendixson rank: symbolic for Cube, Schreier and products, traced otherwise."""
    if not is_compact(f):
        raise FamilyError(f"{f!r} is not compact")
    if isinstance(f, Cube):
        return CnfOrdinal.finite(f.n)
    if isinstance(f, Schreier):
        return OMEGA
    if isinstance(f, Product):
        return cb_rank(f.left, ground, threshold) * cb_rank(f.right, ground, threshold)
    if isinstance(f, Explicit):
        return CnfOrdinal.finite(derivative_rank(f.sets, threshold))
    if isinstance(f, Restrict) and not callable(f.gamma):
        ground = f.gamma if ground is None else [g for g in ground if g in set(f.gamma)]
    if ground is None:
        raise FamilyError(f"rank of {f!r} needs a ground bound")
    return CnfOrdinal.finite(derivative_rank(members(f, ground), threshold))


# -- Ramsey extraction -----------------------------------------------------------

_SEARCH_LIMIT = 1 << 24


def ramsey_number(k: int, l: int, m: int) -> int:
    """Least N such that every m-colouring of [N]^k has an l-set monochromatic on its k-subsets."""
    if l <= k or m == 1:
        return max(l, k)
    if k == 1:
        return m * (l - 1) + 1
    N = l
    while True:
        edges = list(itertools.combinations(range(N), k))
        if m ** len(edges) > _SEARCH_LIMIT:
            raise FamilyError(f"R({k},{l},{m}) brute force exceeds the search limit; pass the size explicitly")
        index = {e: i for i, e in enumerate(edges)}
        groups = [[index[e] for e in itertools.combinations(c, k)]
                  for c in itertools.combinations(range(N), l)]
        if all(any(len({col[i] for i in g}) == 1 for g in groups)
               for col in itertools.product(range(m), repeat=len(edges))):
            return N
        N += 1


def homogeneous_extract(c: Callable, s: Sequence[int], n: int) -> FinSet:
    """A c-homogeneous n-subset of s.

    Colours n-subsets by the tuple of colours of their initial segments of
    length < n, finds a (2n-1)-subset monochromatic for that colouring, and
    returns its first n elements.
    """
    s = tuple(sorted(s))
    if n == 0:
        return ()
    target = 2 * n - 1

    def d(t):
        return tuple(c(t[:i]) for i in range(n))

    chosen: list[int] = []
    if not _search_mono(s, n, target, d, chosen):
        raise FamilyError(f"no monochromatic {target}-subset in a set of size {len(s)}: threshold not met")
    return tuple(chosen[:n])


def _search_mono(s, n, target, d, chosen) -> bool:
    """Fill ``chosen`` with a target-subset of s on whose n-subsets d is constant."""
    def rec(start: int, colour) -> bool:
        if len(chosen) == target:
            return True
        for k in range(start, len(s) - (target - len(chosen)) + 1):
            e = s[k]
            col = colour
            ok = True
            if len(chosen) >= n - 1:
                for w in itertools.combinations(chosen, n - 1):
                    v = d(w + (e,))
                    if col is None:
                        col = v
                    elif v != col:
                        ok = False
                        break
            if ok:
                chosen.append(e)
                if rec(k + 1, col):
                    return True
                chosen.pop()
        return False

    return rec(0, None)


# -- Pták witnesses and the Schreier norm -------------------------------------------


@dataclass
class PtakWitness:
    mu: dict                 # point -> Fraction, sums to 1
    bound: Fraction          # max over members of <mu, chi_s>
    dual: dict               # member -> Fraction weight, sums to 1
    dual_value: Fraction     # min over points of the dual covering mass


def _violated(sets: list[FinSet], mu: dict, t: Fraction, limit: int) -> list[FinSet]:
    """Up to ``limit`` members with mass above t, heaviest first."""
    scored = []
    for s in sets:
        v = sum((mu[g] for g in s), Fraction(0))
        if v > t:
            scored.append((-v, s))
    scored.sort()
    return [s for _, s in scored[:limit]]


def ptak_witness(f, a: Sequence[int], eps: Fraction | None = None) -> PtakWitness:
    """Probability vector on a minimizing the largest mass of a member of f inside a.

    Exact LP with constraint generation over the maximal members; optimality
    is certified by a dual covering distribution with the same value.  When
    ``eps`` is given the result is only returned if the bound is at most eps/2.
    """
    a = tuple(sorted(a))
    if not a:
        raise FamilyError("Pták witness needs a nonempty window")
    for g in a:
        if not member(f, (g,)):
            raise FamilyError(f"singleton {{{g}}} is not in the family")
    sets = maximal_members(f, a)
    pos = {g: i for i, g in enumerate(a)}
    m = len(a)
    active = [max(sets, key=len)]
    while True:
        # variables: mu_0..mu_{m-1}, t ; minimize t
        c = [0] * m + [1]
        A_ub = []
        for s in active:
            row = [0] * (m + 1)
            for g in s:
                row[pos[g]] = 1
            row[m] = -1
            A_ub.append(row)
        res = linprog_exact(c, A_ub, [0] * len(A_ub), [[1] * m + [0]], [1])
        mu = {g: res.x[pos[g]] for g in a}
        t = res.x[m]
        cuts = _violated(sets, mu, t, 8)
        if not cuts:
            break
        active.extend(cuts)
    # dual: y_s >= 0 over active sets, lambda ; maximize lambda
    k = len(active)
    c = [0] * k + [-1]
    A_ub = []
    for g in a:
        row = [0] * (k + 1)
        for j, s in enumerate(active):
            if g in s:
                row[j] = -1
        row[k] = 1
        A_ub.append(row)
    dres = linprog_exact(c, A_ub, [0] * m, [[1] * k + [0]], [1])
    dual = {s: dres.x[j] for j, s in enumerate(active) if dres.x[j]}
    lam = min(sum((w for s, w in dual.items() if g in s), Fraction(0)) for g in a)
    w = PtakWitness({g: v for g, v in mu.items() if v}, t, dual, lam)
    if eps is not None and t > Fraction(eps) / 2:
        raise FamilyError(f"optimal bound {t} exceeds eps/2 = {Fraction(eps) / 2}")
    return w


def verify_ptak(w: PtakWitness, f, a: Sequence[int]) -> list[str]:
    """Problems with a witness; empty iff mu is a probability vector achieving ``bound``
    and the dual distribution certifies that no smaller bound exists."""
    problems = []
    a = tuple(sorted(a))
    if sum(w.mu.values(), Fraction(0)) != 1 or any(v < 0 for v in w.mu.values()):
        problems.append("mu is not a probability vector")
    if not set(w.mu) <= set(a):
        problems.append("mu leaves the window")
    worst = max(sum((w.mu.get(g, Fraction(0)) for g in s), Fraction(0)) for s in members(f, a))
    if worst != w.bound:
        problems.append(f"largest member mass {worst} differs from bound {w.bound}")
    if sum(w.dual.values(), Fraction(0)) != 1 or any(v < 0 for v in w.dual.values()):
        problems.append("dual is not a probability distribution")
    if any(not member(f, s) or not set(s) <= set(a) for s in w.dual):
        problems.append("dual charges a non-member")
    cover = min(sum((v for s, v in w.dual.items() if g in s), Fraction(0)) for g in a)
    if cover != w.bound:
        problems.append(f"dual value {cover} differs from bound {w.bound}")
    return problems


def schreier_norm(x: QVector, f) -> Fraction:
    """max |⟨x, χ_s⟩| over members s (only the part of s inside supp x matters)."""
    supp = support(x)
    best = Fraction(0)
    for s in members(f, supp):
        best = max(best, abs(sum((x[g] for g in s), Fraction(0))))
    return best


@dataclass
class SubsymmetryWitness:
    x: QVector
    y: QVector
    s: FinSet
    norm_x: Fraction
    pairing_y: Fraction


def subsymmetry_witness(f, window: Sequence[int], target: Sequence[int]) -> SubsymmetryWitness:
    """x = the Pták vector on ``window``; y = the same coefficients moved onto a member
    s ⊆ target of size |supp x|, so that ⟨y, χ_s⟩ = 1."""
    w = ptak_witness(f, window)
    supp = tuple(sorted(w.mu))
    s = next((u for u in itertools.combinations(sorted(target), len(supp)) if member(f, u)), None)
    if s is None:
        raise FamilyError(f"no member of size {len(supp)} inside the target window")
    y = {g: w.mu[h] for g, h in zip(s, supp)}
    return SubsymmetryWitness(dict(w.mu), y, s, schreier_norm(w.mu, f),
                              sum((y[g] for g in s), Fraction(0)))


def theta_free_check(theta: Callable, s: Sequence[int]) -> bool:
    """True iff θ(t) ∩ s ⊆ t for every t ⊆ s."""
    s = tuple(s)
    ss = set(s)
    for r in range(len(s) + 1):
        for t in itertools.combinations(s, r):
            if not (set(theta(t)) & ss) <= set(t):
                return False
    return True


# -- descriptor mini-language ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(explicit:@[^\s,()\[\]]+)|(\d+)|([A-Za-z_]+)|(.))")


def parse_family(text: str):
    """``cube(3)``, ``schreier``, ``product(cube(2),schreier)``, ``hproduct(f,g,N)``,
    ``restrict(schreier,[3,4,5])``, ``project(schreier,[2,4,6])``, ``explicit:@file.json``."""
    tokens = []
    for ext, num, name, ch in _TOKEN.findall(text):
        if num:
            tokens.append(("num", int(num)))
        elif ext:
            tokens.append(("file", ext[len("explicit:@"):]))
        elif name:
            tokens.append(("name", name.lower()))
        elif ch.strip():
            tokens.append(("sym", ch))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("eof", None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            raise FamilyError(f"parse error at token {pos} in {text!r}: expected {value or kind}, got {tok[1]!r}")
        pos += 1
        return tok[1]

    def int_list():
        take("sym", "[")
        out = []
        while peek() != ("sym", "]"):
            out.append(take("num"))
            if peek() == ("sym", ","):
                take()
        take("sym", "]")
        return tuple(out)

    def fam():
        kind, val = peek()
        if kind == "file":
            take()
            with open(val) as fh:
                return Explicit(json.load(fh))
        name = take("name")
        if name == "schreier":
            return Schreier()
        take("sym", "(")
        if name == "cube":
            out = Cube(take("num"))
        elif name == "product":
            left = fam()
            take("sym", ",")
            out = Product(left, fam())
        elif name == "hproduct":
            left = fam()
            take("sym", ",")
            right = fam()
            take("sym", ",")
            out = HereditaryProduct(left, right, take("num"))
        elif name in ("restrict", "project"):
            inner = fam()
            take("sym", ",")
            g = int_list()
            out = Restrict(inner, g) if name == "restrict" else Projection(inner, g)
        else:
            raise FamilyError(f"unknown family {name!r}")
        take("sym", ")")
        return out

    out = fam()
    if peek()[0] != "eof":
        raise FamilyError(f"trailing input in {text!r}")
    return out


def describe(f) -> str:
    if isinstance(f, Schreier):
        return "schreier"
    if isinstance(f, Cube):
        return f"cube({f.n})"
    if isinstance(f, Product):
        return f"product({describe(f.left)},{describe(f.right)})"
    if isinstance(f, HereditaryProduct):
        return f"hproduct({describe(f.left)},{describe(f.right)},{f.ground})"
    if isinstance(f, Restrict) and not callable(f.gamma):
        return f"restrict({describe(f.fam)},{list(f.gamma)})".replace(" ", "")
    if isinstance(f, Projection):
        return f"project({describe(f.fam)},{list(f.gamma)})".replace(" ", "")
    if isinstance(f, Explicit):
        return f"explicit[{len(f.sets)} sets]"
    return repr(f)
