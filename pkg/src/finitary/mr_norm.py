"""A Maurey–Rosenthal conditional norm on a finite ground segment.

A colouring ``c`` of block sequences takes values in a lacunary weight set M.
A block sequence ``(s_0, …, s_{d-1})`` is *special* when every proper prefix
union is in the family B and ``|s_i| = c(s_0, …, s_{i-1})``.  The norming set K
holds the functionals ``Σ |s_i|^{-1/2} 1_{s_i}`` over special sequences and

    ‖x‖_K = max(‖x‖_∞, sup_{f ∈ K} ⟨x, f⟩).

Lacunary weights are enormous, so sets are stored as unions of half-open
integer intervals (:data:`Block`) and vector coordinates have the form
``q/√m`` (:class:`SurdVector`).  Values are exact sums of surds
(:class:`Surd`); the supremum is returned as a rational enclosure.

A colour whose weight exceeds the ground size can never be realized by a
block, so such sequences are leaves.  This makes the supremum a finite search.
"""

from __future__ import annotations

import bisect
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import positional as pos
from ._rng import as_rng
from .rho import build_stack

DEFAULT_TOL = Fraction(1, 2**40)
MAX_BITS = 1 << 14


class LacunaryError(ValueError):
    pass


class InstanceError(ValueError):
    pass


class ToleranceUnreachable(RuntimeError):
    pass


# -- exact sums of square roots ---------------------------------------------------


def _sqrt_bounds(N: int, bits: int) -> tuple[Fraction, Fraction]:
    """lo ≤ √N ≤ hi with hi - lo ≤ 2^-bits (equal when N is a perfect square)."""
    r = math.isqrt(N)
    if r * r == N:
        return Fraction(r), Fraction(r)
    s = math.isqrt(N << (2 * bits))
    return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)


class Surd:
    """``Σ c_N √N`` with rational c_N; perfect-square radicands are folded into N = 1."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[int, Fraction] = {}
        for N, c in (terms or {}).items():
            self.add(c, N)

    @classmethod
    def rational(cls, q) -> "Surd":
        return cls({1: Fraction(q)})

    @classmethod
    def inv_sqrt(cls, q, N: int) -> "Surd":
        """``q / √N``."""
        return cls({N: Fraction(q) / N})

    def add(self, c, N: int) -> None:
        if N <= 0:
            raise ValueError("radicand must be positive")
        c = Fraction(c)
        if not c:
            return
        r = math.isqrt(N)
        if r * r == N:
            c, N = c * r, 1
        v = self.terms.get(N, Fraction(0)) + c
        if v:
            self.terms[N] = v
        else:
            self.terms.pop(N, None)

    def __add__(self, other: "Surd") -> "Surd":
        out = Surd(self.terms)
        for N, c in other.terms.items():
            out.add(c, N)
        return out

    def __neg__(self) -> "Surd":
        return Surd({N: -c for N, c in self.terms.items()})

    def __sub__(self, other: "Surd") -> "Surd":
        return self + (-other)

    def scale(self, q) -> "Surd":
        return Surd({N: c * q for N, c in self.terms.items()})

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def exact(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is irrational")
        return self.terms.get(1, Fraction(0))

    def enclose(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        for N, c in self.terms.items():
            a, b = _sqrt_bounds(N, bits)
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def __float__(self) -> float:
        lo, hi = self.enclose(64)
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        return "Surd(" + " + ".join(f"{c}·√{N}" for N, c in sorted(self.terms.items())) + ")"


def certify_le(v: Surd, bound, max_bits: int = MAX_BITS) -> bool | None:
    """True if v ≤ bound is certified, False if v > bound is, None if undecided at max_bits."""
    bound = Fraction(bound)
    if v.is_rational():
        return v.exact() <= bound
    bits = 64
    while bits <= max_bits:
        lo, hi = v.enclose(bits)
        if hi <= bound:
            return True
        if lo > bound:
            return False
        bits *= 2
    return None


# -- lacunary weight sets ---------------------------------------------------------


@dataclass(frozen=True)
class LacunarySet:
    """Weights ``M`` with Σ_{m} Σ_{l ≠ m} min(√(l/m), √(m/l)) ≤ 1 - slack, all ≥ max(n, 1)."""
    weights: tuple
    n: int
    slack: Fraction

    def __contains__(self, w: int) -> bool:
        i = bisect.bisect_left(self.weights, w)
        return i < len(self.weights) and self.weights[i] == w

    def __len__(self) -> int:
        return len(self.weights)


def lacunary_sum(weights: Sequence[int]) -> Surd:
    """The double sum, i.e. ``2 Σ_{l<m} √(l·m)/m``."""
    out = Surd()
    ws = sorted(weights)
    for i, m in enumerate(ws):
        for l in ws[:i]:
            out.add(Fraction(2, m), l * m)
    return out


def check_lacunary(weights: Iterable[int], n: int, max_bits: int = MAX_BITS) -> LacunarySet:
    ws = tuple(int(w) for w in weights)
    if not ws:
        raise LacunaryError("empty weight set")
    if any(a >= b for a, b in zip(ws, ws[1:])):
        raise LacunaryError(f"weights must strictly increase: {ws}")
    if ws[0] < max(n, 1):
        raise LacunaryError(f"weights must be at least max(n, 1) = {max(n, 1)}")
    total = lacunary_sum(ws)
    verdict = certify_le(total, 1, max_bits)
    if verdict is not True:
        lo, _ = total.enclose(64)
        raise LacunaryError(f"lacunary double sum ≈ {float(lo):.6f} is not certified ≤ 1")
    _, hi = total.enclose(64)
    return LacunarySet(ws, n, max(Fraction(0), 1 - hi))


def _next_greedy(ws: Sequence[int], j: int) -> int:
    """Least m > ws[-1] with 2 Σ_l √(l/m) ≤ 2^-j certified."""
    # 2 Σ √(l/m) ≤ 2^-j  ⇔  4^(j+1) (Σ √l)^2 ≤ m
    root_sum = Surd()
    for l in ws:
        root_sum.add(1, l)
    sq = Surd()
    for (N1, c1), (N2, c2) in itertools.product(root_sum.terms.items(), repeat=2):
        sq.add(c1 * c2, N1 * N2)
    target = sq.scale(4 ** (j + 1))
    lo, hi = target.enclose(128)
    m = max(ws[-1] + 1, math.ceil(lo))
    while certify_le(target, m) is not True:
        m += 1
    return m


def lacunary_set(n: int, count: int) -> LacunarySet:
    """Greedy weights: element j ≥ 1 adds at most 2^-j to the double sum.

    Every prefix therefore leaves room for an infinite continuation by the same
    rule, which is where colours beyond the listed weights are sent.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    ws = [max(n, 1)]
    for j in range(1, count):
        ws.append(_next_greedy(ws, j))
    return check_lacunary(ws, n)


# -- blocks as unions of intervals ---------------------------------------------------

Block = tuple  # ((lo, hi), …): sorted, disjoint, non-adjacent half-open intervals


def block(points: Iterable[int]) -> Block:
    out: list[list[int]] = []
    for p in sorted(set(int(p) for p in points)):
        if out and out[-1][1] == p:
            out[-1][1] = p + 1
        else:
            out.append([p, p + 1])
    return tuple((a, b) for a, b in out)


def from_intervals(intervals: Iterable[Sequence[int]]) -> Block:
    ivs = sorted((int(a), int(b)) for a, b in intervals if b > a)
    out: list[list[int]] = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def bsize(b: Block) -> int:
    return sum(hi - lo for lo, hi in b)


def bmin(b: Block) -> int:
    return b[0][0]


def bmax(b: Block) -> int:
    return b[-1][1] - 1


def points(b: Block) -> tuple:
    return tuple(p for lo, hi in b for p in range(lo, hi))


def meet(a: Block, b: Block) -> Block:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo < hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return from_intervals(out)


def meet_size(a: Block, b: Block) -> int:
    return bsize(meet(a, b))


def bunion(blocks: Iterable[Block]) -> Block:
    return from_intervals(iv for b in blocks for iv in b)


def below(b: Block, c: int) -> Block:
    """``b ∩ [0, c)``."""
    if not b or c <= bmin(b):
        return ()
    return meet(b, ((bmin(b), c),))


def contains(b: Block, p: int) -> bool:
    i = bisect.bisect_right(b, (p, math.inf)) - 1
    return i >= 0 and b[i][0] <= p < b[i][1]


def is_subset(a: Block, b: Block) -> bool:
    return meet_size(a, b) == bsize(a)


def _first_difference(s: Block, t: Block) -> int | None:
    """Least point of the symmetric difference, or None if s = t."""
    # membership is constant between consecutive interval endpoints
    for p in sorted({e for iv in s + t for e in iv}):
        if contains(s, p) != contains(t, p):
            return p
    return None


def delta_split(s: Block, t: Block) -> tuple[Block, Block]:
    """``(I, J)`` with I the largest common initial segment and J = (s ∩ t) \\ I."""
    cut = _first_difference(s, t)
    common = meet(s, t)
    if cut is None:
        return common, ()
    I = below(common, cut)
    J = meet(common, ((cut, max(bmax(s), bmax(t)) + 1),)) if common else ()
    return I, J


def in_delta_position(s: Block, t: Block, n: int) -> bool:
    return bsize(delta_split(s, t)[1]) <= n


# -- vectors with surd coordinates --------------------------------------------------


@dataclass(frozen=True)
class SurdVector:
    """Pieces ``(lo, hi, q, m)``: value ``q/√m`` on every point of ``[lo, hi)``."""
    pieces: tuple

    @classmethod
    def from_qvector(cls, x: dict) -> "SurdVector":
        return cls(tuple((g, g + 1, Fraction(v), 1) for g, v in sorted(x.items()) if v))

    @classmethod
    def from_blocks(cls, terms: Iterable[tuple[Block, Fraction, int]]) -> "SurdVector":
        """``Σ q 1_b / √m`` over disjoint blocks b."""
        pieces = []
        for b, q, m in terms:
            pieces.extend((lo, hi, Fraction(q), int(m)) for lo, hi in b)
        pieces.sort()
        for p, r in zip(pieces, pieces[1:]):
            if p[1] > r[0]:
                raise ValueError("blocks of a SurdVector must be disjoint")
        return cls(tuple(pieces))

    def support(self) -> Block:
        return from_intervals((lo, hi) for lo, hi, _, _ in self.pieces)

    def top(self) -> int:
        return max((hi for _, hi, _, _ in self.pieces), default=0)

    def sup_norm(self) -> Surd:
        best = None
        for _, _, q, m in self.pieces:
            key = q * q / m
            if best is None or key > best[0]:
                best = (key, abs(q), m)
        return Surd() if best is None else Surd.inv_sqrt(best[1], best[2])

    def l1_norm(self) -> Surd:
        out = Surd()
        for lo, hi, q, m in self.pieces:
            out = out + Surd.inv_sqrt(abs(q) * (hi - lo), m)
        return out

    def restrict(self, b: Block) -> "SurdVector":
        out = []
        for lo, hi, q, m in self.pieces:
            for a, c in meet(((lo, hi),), b):
                out.append((a, c, q, m))
        return SurdVector(tuple(out))


def as_surd_vector(x) -> SurdVector:
    return x if isinstance(x, SurdVector) else SurdVector.from_qvector(x)


def pairing(seq: Sequence[Block], x: SurdVector) -> Surd:
    """``⟨x, Σ_i |t_i|^{-1/2} 1_{t_i}⟩``."""
    out = Surd()
    for t in seq:
        w = bsize(t)
        for lo, hi, q, m in x.pieces:
            k = meet_size(t, ((lo, hi),))
            if k:
                out.add(q * k / (m * w), m * w)
    return out


def _top_block(x: SurdVector, after: int, ground: int, w: int) -> Block | None:
    """A w-point block in ``(after, ground)`` maximizing ⟨x, 1_T⟩, or None if it does not fit."""
    lo_end = after + 1
    if ground - lo_end < w:
        return None
    region = ((lo_end, ground),)
    pieces = []
    for a, b, q, m in x.pieces:
        for c, d in meet(((a, b),), region):
            pieces.append((c, d, q, m))
    gaps = []
    cur = lo_end
    for c, d, _, _ in sorted(pieces):
        if c > cur:
            gaps.append((cur, c))
        cur = max(cur, d)
    if cur < ground:
        gaps.append((cur, ground))

    def key(p):
        q, m = p[2], p[3]
        return (q * q / m) if q > 0 else -(q * q / m)

    positive = sorted((p for p in pieces if p[2] > 0), key=key, reverse=True)
    negative = sorted((p for p in pieces if p[2] < 0), key=key, reverse=True)
    chosen = []
    need = w
    for c, d in itertools.chain(((p[0], p[1]) for p in positive), gaps, ((p[0], p[1]) for p in negative)):
        if need == 0:
            break
        take = min(need, d - c)
        chosen.append((c, c + take))
        need -= take
    return from_intervals(chosen)


# -- colourings ---------------------------------------------------------------------


def profile(seq: Sequence[Block]) -> tuple:
    return tuple(bsize(b) for b in seq)


class TableColoring:
    """Colours listed explicitly for a prefix-closed set of block sequences.

    Every unlisted sequence is sent to its own weight of the lacunary
    continuation beyond the ground, so it cannot be extended.
    """

    def __init__(self, table: dict):
        self.table = {tuple(tuple(tuple(iv) for iv in b) for b in k): int(v) for k, v in table.items()}
        self._kids: dict[tuple, list] = {}
        for seq in self.table:
            if seq:
                self._kids.setdefault(seq[:-1], []).append(seq[-1])

    def weight(self, seq: Sequence[Block]) -> int | None:
        return self.table.get(tuple(seq))

    def children(self, seq: Sequence[Block], w: int, after: int, ground: int) -> Iterator[Block]:
        for b in self._kids.get(tuple(seq), ()):
            if bsize(b) == w and bmin(b) > after and bmax(b) < ground:
                yield b

    def problems(self, n: int, lac: LacunarySet) -> list[str]:
        """Ways in which the listed part fails to be a good colouring for E_card ∪ E_pos."""
        out = []
        for seq, w in self.table.items():
            if w not in lac:
                out.append(f"weight {w} of {seq} is not in the lacunary set")
            if seq and seq[:-1] not in self.table:
                out.append(f"{seq} is listed but its parent is not")
            if seq:
                parent_w = self.table.get(seq[:-1])
                if parent_w is not None and bsize(seq[-1]) != parent_w:
                    out.append(f"{seq} is not special: last block has size {bsize(seq[-1])}, colour {parent_w}")
            if any(bmax(a) >= bmin(b) for a, b in zip(seq, seq[1:])):
                out.append(f"{seq} is not a block sequence")
        by_weight: dict[int, list] = {}
        for seq, w in self.table.items():
            by_weight.setdefault(w, []).append(seq)
        for w, seqs in by_weight.items():
            for a, b in itertools.combinations(seqs, 2):
                if profile(a) != profile(b):
                    out.append(f"E_card edge with equal colour {w}: {a} vs {b}")
                elif not in_delta_position(bunion(a), bunion(b), n):
                    out.append(f"E_pos edge with equal colour {w}: {a} vs {b}")
        return out

    def to_json(self) -> list:
        return [{"blocks": [[list(iv) for iv in b] for b in seq], "weight": w}
                for seq, w in sorted(self.table.items(), key=lambda kv: (len(kv[0]), kv[0]))]

    @classmethod
    def from_json(cls, rows: list) -> "TableColoring":
        return cls({tuple(from_intervals(b) for b in r["blocks"]): r["weight"] for r in rows})


class StackColoring:
    """The colour (cardinality profile, c_n table of the union) re-enumerated into M.

    Defined on block sequences whose union lies in B_n.  Tokens are numbered
    level by level, tokens of special sequences first, so that the first
    weights of M go to colours that can actually occur along special sequences.
    """

    def __init__(self, fi: pos.FiTable, lac: LacunarySet, ground: int):
        self.fi = fi
        self.lac = lac
        self.ground = ground
        self.index: dict = {}
        self._build()

    def token(self, seq: Sequence[Block]):
        u = points(bunion(seq))
        if not pos.bn_member(u, self.fi):
            return None
        return (profile(seq), pos.cn_color(u, self.fi))

    def _in_range(self, idx: int) -> int | None:
        if idx < len(self.lac.weights) and self.lac.weights[idx] <= self.ground:
            return self.lac.weights[idx]
        return None

    def _build(self) -> None:
        self.index[self.token(())] = 0
        nxt = 1
        frontier = [()] if self._in_range(0) else []
        while frontier:
            found: dict = {}
            for seq in frontier:
                w = self.weight(seq)
                after = bmax(seq[-1]) if seq else -1
                for combo in itertools.combinations(range(after + 1, self.ground), w):
                    child = seq + (block(combo),)
                    tok = self.token(child)
                    if tok is not None:
                        found.setdefault(tok, []).append(child)
            frontier = []
            for tok in sorted(found, key=lambda tk: (tk[0], pos.encode_token(tk[1]))):
                self.index[tok] = nxt
                if self._in_range(nxt):
                    frontier.extend(found[tok])
                nxt += 1

    def weight(self, seq: Sequence[Block]) -> int | None:
        tok = self.token(seq)
        if tok is None:
            return None
        idx = self.index.get(tok)
        return None if idx is None else self._in_range(idx)

    def children(self, seq: Sequence[Block], w: int, after: int, ground: int) -> Iterator[Block]:
        for combo in itertools.combinations(range(after + 1, min(ground, self.ground)), w):
            b = block(combo)
            if self.weight(tuple(seq) + (b,)) is not None:
                yield b


@dataclass
class MRInstance:
    ground: int
    n: int
    lacunary: LacunarySet
    coloring: object
    kind: str = "explicit table"
    meta: dict = field(default_factory=dict)

    def validate(self) -> list[str]:
        out = []
        if self.lacunary.slack <= 0:
            out.append("lacunary set has no slack left for colours beyond the listed weights")
        if self.lacunary.weights[0] < self.n:
            out.append("c(∅) must be at least n")
        if isinstance(self.coloring, TableColoring):
            out.extend(self.coloring.problems(self.n, self.lacunary))
        return out

    def to_json(self) -> str:
        data = {"ground": self.ground, "n": self.n, "weights": list(self.lacunary.weights),
                "coloring": self.kind}
        if isinstance(self.coloring, TableColoring):
            data["table"] = self.coloring.to_json()
        data.update(self.meta)
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str) -> "MRInstance":
        data = json.loads(text)
        lac = check_lacunary(data["weights"], data["n"])
        kind = data.get("coloring", "explicit table")
        if kind == "explicit table":
            col = TableColoring.from_json(data.get("table", []))
            return cls(int(data["ground"]), int(data["n"]), lac, col, kind)
        if kind == "bn-stack":
            return stack_instance(int(data["n"]), int(data["ground"]), lac.weights,
                                  rng=int(data.get("seed", 0)))
        raise InstanceError(f"unknown colouring kind {kind!r}")


def stack_instance(n: int, ground: int, weights: Sequence[int], rng=None) -> MRInstance:
    """An instance on ``range(ground)`` coloured through a freshly built ρ-stack."""
    lac = check_lacunary(weights, n)
    seed = rng if isinstance(rng, int) else None
    stack = build_stack(n, ground, rng=as_rng(rng))
    col = StackColoring(pos.FiTable(stack), lac, ground)
    meta = {"seed": seed} if seed is not None else {}
    return MRInstance(ground, n, lac, col, "bn-stack", meta)


# -- special sequences and the norm ----------------------------------------------------


def _ground_block(ground) -> Block:
    if isinstance(ground, int):
        return ((0, ground),) if ground > 0 else ()
    if ground and isinstance(ground[0], tuple):
        return tuple(ground)
    return block(ground)


def enumerate_special(instance: MRInstance, ground, d: int) -> Iterator[tuple]:
    """All special sequences of length d with terms inside ``ground``, lexicographically.

    Terms are yielded as point tuples, so this is meant for explicit grounds.
    """
    pts = points(_ground_block(ground))
    col = instance.coloring

    def rec(seq: tuple, after: int):
        if len(seq) == d:
            yield tuple(points(b) for b in seq)
            return
        w = col.weight(seq)
        if w is None:
            return
        avail = [p for p in pts if p > after]
        for combo in itertools.combinations(avail, w):
            yield from rec(seq + (block(combo),), combo[-1] if combo else after)

    if d < 0:
        return
    yield from rec((), -1)


def special_candidates(x: SurdVector, instance: MRInstance) -> Iterator[tuple]:
    """Block sequences whose functionals dominate every functional in K on x."""
    col = instance.coloring
    stack = [()]
    while stack:
        seq = stack.pop()
        if seq:
            yield seq
        w = col.weight(seq)
        if w is None:
            continue
        after = bmax(seq[-1]) if seq else -1
        best = _top_block(x, after, instance.ground, w)
        if best is not None:
            yield seq + (best,)
        for b in col.children(seq, w, after, instance.ground):
            stack.append(seq + (b,))


@dataclass(frozen=True)
class NormEnclosure:
    lo: Fraction
    hi: Fraction

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi


def enclose_max(values: Sequence[Surd], tol=DEFAULT_TOL, max_bits: int = MAX_BITS) -> NormEnclosure:
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if all(v.is_rational() for v in values):
        m = max(v.exact() for v in values)
        return NormEnclosure(m, m)
    bits = 64
    while bits <= max_bits:
        bounds = [v.enclose(bits) for v in values]
        lo = max(b[0] for b in bounds)
        hi = max(b[1] for b in bounds)
        if hi - lo <= tol:
            return NormEnclosure(lo, hi)
        bits *= 2
    raise ToleranceUnreachable(f"enclosure wider than {tol} at {max_bits} bits")


def _check_support(x: SurdVector, instance: MRInstance) -> None:
    if x.pieces and (x.pieces[0][0] < 0 or x.top() > instance.ground):
        raise ValueError(f"support of x leaves the ground segment [0, {instance.ground})")


def mr_norm(x, instance: MRInstance, tol=DEFAULT_TOL) -> NormEnclosure:
    x = as_surd_vector(x)
    _check_support(x, instance)
    values = [Surd(), x.sup_norm()]
    values.extend(pairing(seq, x) for seq in special_candidates(x, instance))
    return enclose_max(values, tol)


# -- the witness pair ---------------------------------------------------------------


def find_special(instance: MRInstance, k: int, ground=None) -> tuple | None:
    """A special sequence of length k inside ``ground`` (depth-first, listed children first)."""
    region = _ground_block(instance.ground if ground is None else ground)
    col = instance.coloring
    limit = bmax(region) + 1 if region else 0

    def rec(seq: tuple):
        if len(seq) == k:
            return seq
        w = col.weight(seq)
        if w is None:
            return None
        after = bmax(seq[-1]) if seq else -1
        for b in col.children(seq, w, after, limit):
            if is_subset(b, region):
                out = rec(seq + (b,))
                if out is not None:
                    return out
        if len(seq) == k - 1:
            rest = points(region)
            rest = [p for p in rest if p > after][:w]
            if len(rest) == w:
                return seq + (block(rest),)
        return None

    return rec(())


@dataclass
class ChainEntry:
    """The three-summand estimate of |⟨g, x⟩| for one functional g."""
    g: tuple
    m0: int
    i0: int
    overlap: int
    A: Fraction
    B: Fraction
    B_bound: Fraction
    C_diag: Fraction
    C_cross: Fraction
    value: Fraction
    problems: list

    @property
    def total_bound(self) -> Fraction:
        return self.A + self.B + self.C_diag + self.C_cross


@dataclass
class WitnessReport:
    k: int
    s: tuple
    x_norm: NormEnclosure
    y_norm: NormEnclosure
    pairing_f_y: Fraction
    suppression_lower: Fraction
    chain: list

    @property
    def ok(self) -> bool:
        return (self.x_norm.hi <= 4 and self.y_norm.lo >= Fraction(self.k, 2)
                and self.suppression_lower >= Fraction(self.k, 8)
                and all(not e.problems for e in self.chain))


def _hi(v: Surd) -> Fraction:
    return v.exact() if v.is_rational() else v.enclose(96)[1]


def chain_entry(g: Sequence[Block], s: Sequence[Block], x: SurdVector, n: int, lac_sum_hi: Fraction) -> ChainEntry:
    """Split |⟨g, x⟩| for x = Σ (-1)^i 1_{s_i}/√|s_i| as in the cancellation estimate."""
    g, s = tuple(g), tuple(s)
    d, k = len(g), len(s)
    problems = []
    sz_s = [bsize(b) for b in s]
    sz_g = [bsize(b) for b in g]
    m0 = -1
    for i in range(min(d, k)):
        if sz_s[i] != sz_g[i]:
            break
        m0 = i
    S, T = bunion(s[:max(m0, 0)]), bunion(g[:max(m0, 0)])
    I, J = delta_split(S, T) if m0 > 0 else ((), ())
    if bsize(J) > n:
        problems.append(f"prefix unions of length {m0} are not in {n}-Δ-position (|J| = {bsize(J)})")
    i0 = -1
    for i in range(max(m0, 0)):
        if is_subset(s[i], I):
            i0 = i

    def term(i: int, j: int) -> Surd:
        return Surd.inv_sqrt(Fraction((-1) ** j * meet_size(g[i], s[j])), sz_g[i] * sz_s[j])

    A = Surd()
    for i in range(i0 + 1):
        if g[i] != s[i]:
            problems.append(f"block {i} lies inside the common root but differs")
        A = A + term(i, i)
    B = Surd()
    for i in range(i0 + 1, max(m0, 0)):
        B = B + term(i, i)
    mid = range(i0 + 1, max(m0, 0))
    overlap = meet_size(bunion(s[i] for i in mid), bunion(g[i] for i in mid)) if m0 > 0 else 0
    B_bound = Fraction(overlap, min((sz_s[i] for i in mid), default=1))
    C_diag = Surd()
    if 0 <= m0 < min(d, k):
        C_diag = term(m0, m0)
    C_cross = Surd()
    for i in range(d):
        for j in range(k):
            if i == j and i <= m0:
                continue
            if sz_g[i] == sz_s[j]:
                if i != j:
                    problems.append(f"|t_{i}| = |s_{j}| with {i} ≠ {j}")
                else:
                    # equal sizes past the agreement index
                    problems.append(f"sizes agree at {i} beyond m0 = {m0}")
            C_cross = C_cross + Surd.inv_sqrt(meet_size(g[i], s[j]), sz_g[i] * sz_s[j])
    A_v, B_v, C_d = abs(A.exact()), abs(B.exact()), abs(C_diag.exact())
    C_x = _hi(C_cross)
    if A_v > 1:
        problems.append(f"first summand {A_v} > 1")
    if B_v > B_bound:
        problems.append(f"middle summand {B_v} exceeds overlap bound {B_bound}")
    if B_bound > 1:
        problems.append(f"overlap bound {B_bound} > 1")
    if C_d > 1 or C_x > lac_sum_hi:
        problems.append(f"last summand {C_d} + {C_x} exceeds 1 + {lac_sum_hi}")
    pg = pairing(g, x)
    lo, hi = (pg.exact(), pg.exact()) if pg.is_rational() else pg.enclose(96)
    value = max(abs(lo), abs(hi))
    if lo > A_v + B_v + C_d + C_x or -hi > A_v + B_v + C_d + C_x:
        problems.append("triangle inequality fails")
    return ChainEntry(g, m0, i0, overlap, A_v, B_v, B_bound, C_d, C_x, value, problems)


def witness_vectors(s: Sequence[Block]) -> tuple[SurdVector, SurdVector]:
    x = SurdVector.from_blocks((b, (-1) ** i, bsize(b)) for i, b in enumerate(s))
    y = SurdVector.from_blocks((b, 1, bsize(b)) for i, b in enumerate(s) if i % 2 == 0)
    return x, y


def unconditionality_witness(instance: MRInstance, ground=None, k: int = 2, tol=DEFAULT_TOL,
                             chain: bool = True):
    """``(x, y, report)`` for a special sequence s of length k inside ``ground``.

    x alternates signs over the normalized blocks, y keeps the even ones.  The
    report carries ‖x‖ and ‖y‖ enclosures, the exact value ⟨f, y⟩ for the full
    functional f of s, the certified suppression lower bound ‖y‖/‖x‖, and the
    term-by-term estimate for every dominating functional.
    """
    s = find_special(instance, k, ground)
    if s is None:
        raise InstanceError(f"no special sequence of length {k} fits in the ground")
    x, y = witness_vectors(s)
    xn = mr_norm(x, instance, tol)
    yn = mr_norm(y, instance, tol)
    fy = pairing(s, y).exact()
    entries = []
    if chain:
        _, lac_hi = lacunary_sum(instance.lacunary.weights).enclose(64)
        entries = [chain_entry(g, s, x, instance.n, lac_hi) for g in special_candidates(x, instance)]
    report = WitnessReport(k, s, xn, yn, fy, yn.lo / xn.hi, entries)
    return x, y, report


# -- generated instances ---------------------------------------------------------------


def _randbelow(gen, n: int) -> int:
    """Uniform draw from range(n) for arbitrarily large n."""
    if n < 2**62:
        return int(gen.integers(0, n))
    nbytes = (n.bit_length() + 7) // 8 + 8
    return int.from_bytes(gen.bytes(nbytes), "big") % n


def generate_instance(k: int, n: int = 1, rng=None, shadows: int = 2, branches: int = 1) -> MRInstance:
    """An explicit-table instance carrying a special sequence of length k.

    Besides the main sequence s, ``shadows`` sequences leave s at some level and
    then keep its colours, overlapping s in at most n points (allowed, since
    their unions stay in n-Δ-position), and ``branches`` sequences leave s and
    receive a fresh colour.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    gen = as_rng(rng)
    lac = lacunary_set(n, k + 1 + branches)
    W = lac.weights
    lanes = shadows + branches
    # level i: s_i split in two intervals around lane regions of width W[i]
    cursor = 0
    s_blocks, lane_start = [], []
    for i in range(k):
        w = W[i]
        a = 1 + _randbelow(gen, w)
        first = (cursor, cursor + a)
        cursor += a
        lane_start.append([cursor + j * w for j in range(lanes)])
        cursor += lanes * w
        second = (cursor, cursor + w - a)
        cursor += w - a + 1
        s_blocks.append(from_intervals([first, second]))
    layout_end = cursor
    ground = layout_end + W[-1] + 1

    table: dict = {(): W[0]}
    for i in range(1, k + 1):
        table[tuple(s_blocks[:i])] = W[i]

    def lane_block(i: int, lane: int, overlap: int) -> Block:
        w = W[i]
        s_pts = s_blocks[i]
        # take the first `overlap` points of s_i, fill the rest from the lane
        take = meet(s_pts, ((bmin(s_pts), bmin(s_pts) + overlap),)) if overlap else ()
        start = lane_start[i][lane]
        return from_intervals(list(take) + [(start, start + w - bsize(take))])

    for lane in range(shadows):
        if k < 2:
            break
        j = int(gen.integers(0, k - 1))
        budget = n
        seq = list(s_blocks[:j])
        for i in range(j, k):
            o = int(gen.integers(0, min(budget, bsize(s_blocks[i]) - 1) + 1)) if i % 2 == 0 else 0
            budget -= o
            seq.append(lane_block(i, lane, o))
            table[tuple(seq)] = W[i + 1]
    for b in range(branches):
        j = int(gen.integers(0, k))
        lane = shadows + b
        blk = lane_block(j, lane, _randbelow(gen, bsize(s_blocks[j])) if j % 2 == 0 else 0)
        table[tuple(s_blocks[:j]) + (blk,)] = W[k + 1 + b]
    inst = MRInstance(ground, n, lac, TableColoring(table))
    bad = inst.validate()
    if bad:
        raise InstanceError("generated instance is not valid: " + "; ".join(bad[:3]))
    return inst
