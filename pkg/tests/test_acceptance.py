"""The ten acceptance criteria, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` and look for the ``ACCEPTANCE`` lines.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from finitary import families as fam
from finitary import mr_norm as mr
from finitary.namba import alpha, brute_force_winner, monotonicity_check, replay, solve
from finitary.positional import (FiTable, cn_sample, equal_color_delta_profile, good_coloring_audit,
                                 not_in_delta_position, proposition_check)
from finitary.rho import RhoTable, build_stack, is_valid, synthesize_rho, verify_rho
from finitary.tsirelson import TNormInstance, bellenot_profile, projection_check, t_norm, t_norm_iterates

from test_families import random_hereditary, rank_ref
from test_rho import brute_valid
from test_tsirelson import norm_ref, random_vector

HALF = Fraction(1, 2)


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


# 1 ---------------------------------------------------------------------------------


def test_criterion_1_mr_bounds(verdict):
    bad, worst_x, slowest = [], Fraction(0), 0.0
    for n in (1, 2):
        for seed in range(3):
            for k in (2, 4, 8, 16):
                inst = mr.generate_instance(k, n, rng=1000 * n + 10 * seed + k)
                t0 = time.perf_counter()
                _, _, rep = mr.unconditionality_witness(inst, k=k, tol=mr.DEFAULT_TOL)
                dt = time.perf_counter() - t0
                if k == 16:
                    slowest = max(slowest, dt)
                worst_x = max(worst_x, rep.x_norm.hi)
                if not (rep.x_norm.hi <= 4 and rep.y_norm.lo >= Fraction(k, 2)
                        and rep.suppression_lower >= Fraction(k, 8)):
                    bad.append((n, seed, k))
                bad.extend((n, seed, k, p) for e in rep.chain for p in e.problems)
    ok = not bad and slowest <= 60
    verdict(1, ok, f"24 instances, max ‖x‖ ≤ {float(worst_x):.6f}, k=16 in {slowest:.2f}s, problems={bad[:3]}")


# 2 ---------------------------------------------------------------------------------


def _normalized(b):
    return mr.SurdVector.from_blocks([(b, 1, mr.bsize(b))])


def _random_union(rnd, size, ground):
    """A union of up to three intervals with ``size`` points inside range(ground)."""
    parts = rnd.randint(1, min(3, size))
    cuts = set()
    while len(cuts) < parts - 1:
        cuts.add(rnd.randrange(1, size))
    cuts = sorted(cuts)
    lens = [b - a for a, b in zip([0] + cuts, cuts + [size])]
    free = ground - size
    gaps = sorted(rnd.randrange(free + 1) for _ in lens)
    out, cur = [], 0
    prev_gap = 0
    for g, l in zip(gaps, lens):
        cur += g - prev_gap
        out.append((cur, cur + l))
        cur += l
        prev_gap = g
    return mr.from_intervals(out)


def test_criterion_2_weak_null(verdict):
    checked, worst, bad = 0, Fraction(0), []

    def check(b, inst, tag):
        nonlocal checked, worst
        enc = mr.mr_norm(_normalized(b), inst)
        checked += 1
        worst = max(worst, enc.hi)
        if enc.hi > 2:
            bad.append((tag, enc.hi))

    # every s on small stack instances
    for n, G, ws, seed in [(1, 10, [1, 5], 0), (1, 10, [1, 5], 1), (2, 12, [2, 9], 0)]:
        inst = mr.stack_instance(n, G, ws, rng=seed)
        for w in ws:
            for s in itertools.combinations(range(G), w):
                check(mr.block(s), inst, ("stack", n, s))
    # generated instances: the special blocks, every listed decoy, random unions
    rnd = random.Random(7)
    for n in (1, 2):
        for k in (2, 4, 8, 16):
            inst = mr.generate_instance(k, n, rng=50 + k + n)
            sizes = [w for w in inst.lacunary.weights if w <= inst.ground]
            blocks = {b for seq in inst.coloring.table for b in seq}
            for b in blocks:
                if mr.bsize(b) in inst.lacunary:
                    check(b, inst, ("listed", n, k))
            for _ in range(20):
                check(_random_union(rnd, rnd.choice(sizes), inst.ground), inst, ("random", n, k))
    verdict(2, not bad, f"{checked} vectors (all s on 3 stack instances; listed and random s on 8 generated), "
                        f"max hi = {float(worst):.6f}, failures={bad[:3]}")


# 3 ---------------------------------------------------------------------------------


def test_criterion_3_good_coloring(verdict):
    viol, prop, seen_k = 0, 0, {}
    stacks = 0
    for n in (1, 2):
        for seed in range(10):
            ft = FiTable(build_stack(n, 12, rng=seed))
            sample = cn_sample(ft, range(12))
            viol += len(good_coloring_audit(sample, not_in_delta_position(n)))
            seen_k[n] = max(seen_k.get(n, -1), equal_color_delta_profile(sample))
            prop += len(proposition_check(FiTable(build_stack(n, 8, rng=seed)), range(8)))
            stacks += 1
    verdict(3, viol == 0 and prop == 0,
            f"{stacks} stacks at ground 12: {viol} audit violations; proposition failures at ground 8: {prop}; "
            f"observed minimal k per n: {seen_k}")


# 4 ---------------------------------------------------------------------------------


def test_criterion_4_rho_oracle(verdict):
    gen = np.random.default_rng(2024)
    disagree = 0
    for _ in range(1000):
        N, M = int(gen.integers(2, 7)), int(gen.integers(1, 5))
        vals = {p: int(gen.integers(0, M)) for p in itertools.combinations(range(N), 2)}
        disagree += (not verify_rho(RhoTable(N, vals))) != brute_valid(N, vals)
    missed = []
    for N in range(2, 6):
        pairs = list(itertools.combinations(range(N), 2))
        for M in range(1, 5):
            exists = any(brute_valid(N, dict(zip(pairs, v))) for v in itertools.product(range(M), repeat=len(pairs)))
            got = synthesize_rho(N, M)
            if exists and (got is None or not is_valid(got)) or (not exists and got is not None):
                missed.append((N, M))
    verdict(4, disagree == 0 and not missed,
            f"1000 random tables, {disagree} disagreements; synthesis vs exhaustive N ≤ 5, M ≤ 4: mismatches {missed}")


# 5 ---------------------------------------------------------------------------------


def test_criterion_5_tsirelson(verdict):
    gen = np.random.default_rng(55)
    families = [fam.Schreier(), fam.Cube(1), fam.Cube(2), fam.Cube(3), fam.Cube(4)]
    mism, uncond, total = 0, 0, 0
    for f in families:
        for _ in range(100):
            x = random_vector(gen, list(range(1, 13)), int(gen.integers(1, 7)))
            inst = TNormInstance(HALF, f)
            v = t_norm(x, inst)
            total += 1
            mism += v != norm_ref(x, HALF, f)
            for r in range(len(x)):
                for keep in itertools.combinations(sorted(x), r):
                    if t_norm({p: x[p] for p in keep}, inst) > v:
                        uncond += 1
                    flipped = {p: -c if p in keep else c for p, c in x.items()}
                    if t_norm(flipped, inst) != v:
                        uncond += 1
    example = t_norm({3: 1, 4: 1, 5: 1}, TNormInstance(HALF, fam.Schreier()))
    verdict(5, mism == 0 and uncond == 0 and example == Fraction(3, 2),
            f"{total} vectors: {mism} mismatches vs literal recursion, {uncond} unconditionality failures, "
            f"‖u3+u4+u5‖ = {example}")


# 6 ---------------------------------------------------------------------------------


def test_criterion_6_bellenot(verdict):
    t0 = time.perf_counter()
    c0 = bellenot_profile(HALF, 2, 32)
    bound = max(r.norm for r in c0)
    lp = bellenot_profile(HALF, 4, 32)
    p32 = lp[-1].p_hat
    second, _ = t_norm_iterates({i: 1 for i in range(32)}, TNormInstance(HALF, fam.Cube(4)))
    dt = time.perf_counter() - t0
    ok_a = all(r.norm <= bound for r in c0) and bound <= 1
    ok_b = p32 is not None and 1.7 <= p32 <= 2.0
    verdict(6, ok_a and ok_b and second == lp[-1].norm and dt <= 120,
            f"n=2: max norm {bound} over m ≤ 32 ({'bounded' if ok_a else 'unbounded'}); "
            f"n=4: ‖Σ_{{i<32}} u_i‖ = {lp[-1].norm} (iteration agrees: {second == lp[-1].norm}), "
            f"p̂(32) = {p32:.4f} {'in' if ok_b else 'outside'} [1.7, 2.0]; {dt:.1f}s")


# 7 ---------------------------------------------------------------------------------


def test_criterion_7_projection(verdict):
    gen = np.random.default_rng(77)
    bad = []
    for i in range(200):
        gamma = sorted(gen.choice(range(1, 13), size=int(gen.integers(1, 8)), replace=False).tolist())
        x = random_vector(gen, gamma, int(gen.integers(1, len(gamma) + 1)))
        f = fam.Schreier() if i % 2 else fam.Cube(int(gen.integers(1, 5)))
        lhs, rhs = projection_check(x, TNormInstance(HALF, f), gamma)
        if lhs != rhs:
            bad.append((fam.describe(f), gamma, x))
    verdict(7, not bad, f"200 triples (Schreier and Cube, ground ≤ 12), {len(bad)} inequalities")


# 8 ---------------------------------------------------------------------------------


def down_sets(ground):
    """Every hereditary family on ``ground`` (including the empty family)."""
    subs = [s for r in range(len(ground) + 1) for s in itertools.combinations(ground, r)]

    def rec(i, chosen):
        if i == len(subs):
            yield frozenset(chosen)
            return
        s = subs[i]
        yield from rec(i + 1, chosen)
        if all(s[:j] + s[j + 1:] in chosen for j in range(len(s))):
            chosen.add(s)
            yield from rec(i + 1, chosen)
            chosen.discard(s)

    return rec(0, set())


def _game_problems(f, N):
    out = []
    for n in range(1, 4):
        if N < 2 * n - 1:
            break
        winner, sigma = solve(f, N, n)
        if winner != brute_force_winner(f, N, n) or replay(sigma, f, N, n) or not sigma.is_legal():
            out.append((N, n, "strategy"))
        if not monotonicity_check(f, N, n):
            out.append((N, n, "monotonicity"))
    return out


def test_criterion_8_games(verdict):
    problems, exhaustive, sampled = [], 0, 0
    for N in range(1, 6):
        for sets in down_sets(tuple(range(N))):
            exhaustive += 1
            problems += _game_problems(fam.Explicit(sets, check=False), N)
    gen = np.random.default_rng(88)
    for N in (6, 7, 8):
        for _ in range(300):
            f = random_hereditary(gen, list(range(N)), int(gen.integers(1, 7)))
            sampled += 1
            problems += _game_problems(f, N)
    ranks = [(k, alpha(fam.Cube(k), 2 * k + 4, k + 2), int(fam.cb_rank(fam.Cube(k)))) for k in range(1, 5)]
    rank_ok = all(k == a == r for k, a, r in ranks)
    verdict(8, not problems and rank_ok,
            f"all {exhaustive} hereditary families on grounds 1..5 (exhaustive) and {sampled} sampled on grounds "
            f"6..8, n ≤ 3: {len(problems)} problems; (k, α, rank) = {ranks}")


# 9 ---------------------------------------------------------------------------------


def test_criterion_9_cb_rank(verdict):
    r1 = fam.cb_rank(fam.Product(fam.Cube(2), fam.Schreier()))
    r2 = fam.cb_rank(fam.Product(fam.Schreier(), fam.Schreier()))
    gen = np.random.default_rng(99)
    bad = 0
    for _ in range(100):
        f = random_hereditary(gen, list(range(8)), int(gen.integers(1, 8)))
        bad += fam.cb_rank(f) != rank_ref(f.sets)
    verdict(9, str(r1) == "ω" and str(r2) == "ω^2" and bad == 0,
            f"rank(Cube(2)⊗S) = {r1}, rank(S⊗S) = {r2}, explicit-rank disagreements {bad}/100")


# 10 --------------------------------------------------------------------------------


def test_criterion_10_ptak(verdict):
    misses, cert_bad, runs = [], 0, 0
    for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 4)):
        base = math.ceil(2 / eps)
        for start in (1, 2, 4):
            for size in (base, 2 * base):
                window = range(start, start + size)
                w = fam.ptak_witness(fam.Schreier(), window)
                runs += 1
                cert_bad += bool(fam.verify_ptak(w, fam.Schreier(), window))
                if w.bound > eps / 2:
                    misses.append(f"ε={eps} {start}..{start + size - 1}: {w.bound}")
    sub = fam.subsymmetry_witness(fam.Schreier(), range(1, 9), range(8, 40))
    pair_ok = sub.norm_x <= HALF and sub.pairing_y == 1
    verdict(10, not misses and cert_bad == 0 and pair_ok,
            f"{runs} windows, LP certificates failing {cert_bad}, bound > ε/2 on {len(misses)}: {misses[:4]}; "
            f"C=1 pair ‖x‖ = {sub.norm_x} ≤ 1/2 and ⟨y, χ_s⟩ = {sub.pairing_y}")
