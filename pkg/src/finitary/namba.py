"""The (B, n) ordinal-picking game on a finite arena.

Player I picks γ_0, II answers η_0 > γ_0, I picks γ_1 > η_0, and so on; I wins
iff {γ_0, …, γ_{n-1}} is in the family.  II's last answer never matters, so a
play consists of 2n-1 relevant moves.

On the arena ``range(N)`` a move is legal only when enough points remain above
it for every relevant move still to come.  Without this room rule Player II
would win every game by jumping to the top of the arena.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from . import families as fam

I, II = "I", "II"


class ArenaError(ValueError):
    pass


@dataclass(frozen=True)
class GamePosition:
    picks_I: tuple
    picks_II: tuple

    @property
    def to_move(self) -> str:
        return I if len(self.picks_I) == len(self.picks_II) else II


@dataclass
class Strategy:
    """Moves of ``player`` keyed by the opponent's history so far."""
    player: str
    n: int
    table: dict = field(default_factory=dict)

    def __call__(self, history: Sequence[int]) -> int:
        return self.table[tuple(history)]

    def is_legal(self) -> bool:
        return all(not h or h[-1] < mv for h, mv in self.table.items())


def _moves_left(k: int, n: int) -> int:
    return 2 * n - 1 - k


@dataclass
class Game:
    f: object
    N: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ArenaError("the game needs at least one round")
        if self.N < 2 * self.n - 1:
            raise ArenaError(f"arena of size {self.N} has no room for {2 * self.n - 1} moves")
        self.tracker = fam.PrefixTracker(self.f)
        self._value = lru_cache(maxsize=None)(self._value_impl)

    def legal_moves(self, k: int, last: int) -> range:
        """Moves available as move number k (0-based) after ``last``."""
        room_after = _moves_left(k, self.n) - 1
        return range(last + 1, self.N - room_after)

    def _value_impl(self, k: int, last: int, res) -> bool:
        """True iff Player I wins from here with best play."""
        if k == 2 * self.n - 1:
            return True  # residual stayed inside the family
        if k % 2 == 0:
            for g in self.legal_moves(k, last):
                r = self.tracker.step(res, g)
                if r is not False and self._value(k + 1, g, r):
                    return True
            return False
        return all(self._value(k + 1, e, res) for e in self.legal_moves(k, last))

    def first_player_wins(self) -> bool:
        return self._value(0, -1, self.tracker.init)

    def strategy(self, player: str) -> Strategy:
        """The least-winning-move strategy for ``player`` over every reachable history."""
        sigma = Strategy(player, self.n)

        def walk(k: int, last: int, res, own: tuple, opp: tuple) -> None:
            if k == 2 * self.n - 1:
                return
            mover = I if k % 2 == 0 else II
            if mover == player:
                for g in self.legal_moves(k, last):
                    if res is False:
                        # I already left the family; any move keeps II winning
                        sigma.table[opp] = g
                        walk(k + 1, g, res, own + (g,), opp)
                        return
                    r = self.tracker.step(res, g) if mover == I else res
                    if r is False:
                        continue
                    if self._value(k + 1, g, r) == (player == I):
                        sigma.table[opp] = g
                        walk(k + 1, g, r, own + (g,), opp)
                        return
                raise AssertionError("no winning move from a winning position")
            for g in self.legal_moves(k, last):
                r = res if res is False or mover == II else self.tracker.step(res, g)
                walk(k + 1, g, r, own, opp + (g,))

        walk(0, -1, self.tracker.init, (), ())
        return sigma


def solve(f, N: int, n: int) -> tuple[str, Strategy]:
    game = Game(f, N, n)
    winner = I if game.first_player_wins() else II
    return winner, game.strategy(winner)


def replay(sigma: Strategy, f, N: int, n: int) -> list[tuple]:
    """Every legal opponent line against sigma that sigma loses (empty iff sigma wins)."""
    game = Game(f, N, n)
    losses = []

    def walk(k: int, last: int, gammas: tuple, opp: tuple, full: tuple) -> None:
        if k == 2 * n - 1:
            won_by_I = fam.member(f, gammas)
            if won_by_I != (sigma.player == I):
                losses.append(full)
            return
        mover = I if k % 2 == 0 else II
        if mover == sigma.player:
            mv = sigma.table.get(opp)
            if mv is None or mv not in game.legal_moves(k, last):
                losses.append(full + ("no move",))
                return
            nxt = gammas + (mv,) if mover == I else gammas
            walk(k + 1, mv, nxt, opp, full + (mv,))
            return
        for g in game.legal_moves(k, last):
            nxt = gammas + (g,) if mover == I else gammas
            walk(k + 1, g, nxt, opp + (g,), full + (g,))

    walk(0, -1, (), (), ())
    return losses


def brute_force_winner(f, N: int, n: int) -> str:
    """Plain minimax over the full game tree with the same room rule (no memo)."""
    def value(k: int, last: int, gammas: tuple) -> bool:
        if k == 2 * n - 1:
            return fam.member(f, gammas)
        room_after = 2 * n - 1 - k - 1
        moves = range(last + 1, N - room_after)
        if k % 2 == 0:
            return any(value(k + 1, g, gammas + (g,)) for g in moves)
        return all(value(k + 1, e, gammas) for e in moves)

    if N < 2 * n - 1:
        raise ArenaError("arena too small")
    return I if value(0, -1, ()) else II


def alpha(f, N: int, n_max: int) -> int:
    """Largest n ≤ n_max for which Player I wins on the arena (0 if none)."""
    best = 0
    for n in range(1, n_max + 1):
        if N < 2 * n - 1:
            break
        if Game(f, N, n).first_player_wins():
            best = n
    return best


def monotonicity_check(f, N: int, n: int) -> bool:
    """I winning at n implies I wins at every m ≤ n; II winning at n implies II wins at n+1."""
    def wins(m):
        return Game(f, N, m).first_player_wins()

    if wins(n):
        return all(wins(m) for m in range(1, n))
    if N >= 2 * (n + 1) - 1:
        return not wins(n + 1)
    return True


# -- closure under a strategy ----------------------------------------------------


def closed_set(sigma: Strategy | Callable, N: int, n: int, target_size: int | None = None,
               limit: int | None = None, max_len: int | None = None) -> tuple:
    """Greedy set C = {c_0 < c_1 < …} with c_{j+1} above every σ(s), s ⊆ [0, c_j].

    c_0 is σ(∅) when the strategy has an opening move, 0 otherwise.

    For a table strategy the histories are its keys; for a callable, every s
    with |s| ≤ max_len (default n - 2) is used.  Points stay below ``limit``
    (default N).  Raises :class:`ArenaError` if ``target_size`` cannot be met.
    """
    limit = N if limit is None else limit
    if isinstance(sigma, Strategy):
        entries = sorted(((max(h) if h else -1), mv) for h, mv in sigma.table.items())

        def top(c: int) -> int:
            return max((mv for m, mv in entries if m <= c), default=-1)
    else:
        max_len = n - 2 if max_len is None else max_len

        def top(c: int) -> int:
            best = -1
            for r in range(0, max_len + 1):
                for s in itertools.combinations(range(c + 1), r):
                    best = max(best, sigma(s))
            return best

    # I's opening move must project onto min C
    start = sigma.table.get((), 0) if isinstance(sigma, Strategy) else 0
    C = [start]
    while target_size is None or len(C) < target_size:
        nxt = max(top(C[-1]), C[-1]) + 1
        if nxt >= limit:
            break
        C.append(nxt)
    if target_size is not None and len(C) < target_size:
        raise ArenaError(f"arena exhausted after {len(C)} points, wanted {target_size}")
    return tuple(C)


def check_closure(sigma: Strategy | Callable, C: Sequence[int], n: int, histories=None) -> list[tuple]:
    """Pairs (γ, s) breaking σ(s) < next point of C above γ, for s ⊆ [0, γ]."""
    C = tuple(C)
    bad = []
    if histories is None:
        histories = sigma.table.keys()
    for j, c in enumerate(C[:-1]):
        for s in histories:
            if (not s or max(s) <= c):
                v = sigma(s)
                if not (v < C[j + 1] or v <= c):
                    bad.append((c, s))
    return bad


# -- lemma-level consequences ------------------------------------------------------


@dataclass
class LemmaReport:
    C: tuple
    checked: int
    violations: list


def _block_sequences(points: Sequence[int], max_len: int, max_block: int = 2):
    """Block sequences of subsets of ``points`` with at most max_len terms of size ≤ max_block."""
    points = tuple(points)

    def rec(start: int, prefix: tuple):
        if prefix:
            yield prefix
        if len(prefix) == max_len:
            return
        for i in range(start, len(points)):
            for size in range(1, max_block + 1):
                for rest in itertools.combinations(points[i + 1:], size - 1):
                    block = (points[i],) + rest
                    yield from rec(points.index(block[-1]) + 1, prefix + (block,))

    yield from rec(0, ())


def lemma_I_check(f, N: int, n: int, sigma: Strategy | None = None, limit: int | None = None) -> LemmaReport:
    """With I's winning σ and C closed under σ: {min C} ∪ (n-1 non-minimal points of C) lies in
    the projection of f onto C, and short block sequences inside C are admissible."""
    from .tsirelson import admissible

    if sigma is None:
        winner, sigma = solve(f, N, n)
        if winner != I:
            raise ArenaError(f"Player I does not win the {n}-round game on this arena")
    C = closed_set(sigma, N, n, limit=limit if limit is not None else N - 2 * n + 2)
    proj = fam.Projection(f, C)
    viol = []
    checked = 0
    for rest in itertools.combinations(C[1:], n - 1):
        checked += 1
        s = (C[0],) + rest
        if not fam.member(proj, s):
            viol.append(("projection", s))
    for blocks in _block_sequences(C, n):
        checked += 1
        if admissible(blocks, f) is None:
            viol.append(("admissible", blocks))
    return LemmaReport(C, checked, viol)


def lemma_II_check(f, N: int, n: int, sigma: Strategy | None = None, rounds: int | None = None,
                   limit: int | None = None) -> LemmaReport:
    """With II's winning σ (for ``rounds`` rounds, default n) and C closed under σ: spread-out
    n-subsets of C avoid the projection, projected members inside C have fewer than 2n-1
    points, and admissible block sequences in C have fewer than 2n-1 terms with at most n of
    size ≥ 2."""
    from .tsirelson import admissible

    rounds = n if rounds is None else rounds
    if sigma is None:
        winner, sigma = solve(f, N, rounds)
        if winner != II:
            raise ArenaError(f"Player II does not win the {rounds}-round game on this arena")
    C = closed_set(sigma, N, rounds, limit=limit if limit is not None else N - 2 * rounds + 2)
    proj = fam.Projection(f, C)
    viol = []
    checked = 0
    pos = {c: i for i, c in enumerate(C)}
    for s in itertools.combinations(C, n):
        if all(pos[b] - pos[a] >= 2 for a, b in zip(s, s[1:])):
            checked += 1
            if fam.member(proj, s):
                viol.append(("spread", s))
    for s in fam.members(proj, C):
        checked += 1
        if len(s) >= 2 * n - 1:
            viol.append(("size", s))
    for blocks in _block_sequences(C, 2 * n):
        if admissible(blocks, f) is None:
            continue
        checked += 1
        big = sum(1 for b in blocks if len(b) >= 2)
        if not (len(blocks) < 2 * n - 1 and big <= n):
            viol.append(("admissible", blocks))
    return LemmaReport(C, checked, viol)
