import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from finitary import families as fam
from finitary.families import (Cube, Explicit, FamilyError, HereditaryProduct, Product, Projection, Restrict,
                               Schreier, cb_rank, derivative_rank, hereditary_closure, homogeneous_extract,
                               is_hereditary, is_homogeneous, is_large_window, maximal_members, member, members,
                               parse_family, ptak_witness, ramsey_number, schreier_norm, subsymmetry_witness,
                               theta_free_check, verify_ptak)
from finitary.ordinals import OMEGA, CnfOrdinal


def compositions(s):
    """Every split of s into consecutive nonempty pieces."""
    for k in range(len(s)):
        for cuts in itertools.combinations(range(1, len(s)), k):
            edges = (0,) + cuts + (len(s),)
            yield [s[a:b] for a, b in zip(edges, edges[1:])]


def product_ref(left, right, s):
    if not s:
        return member(right, ())
    return any(all(member(left, b) for b in bs) and member(right, tuple(b[0] for b in bs))
               for bs in compositions(s))


def rank_ref(sets):
    sets = set(sets)

    def rk(s):
        ups = [u for u in sets if len(u) == len(s) + 1 and set(s) <= set(u)]
        return max((rk(u) + 1 for u in ups), default=0)

    return rk(())


def random_hereditary(gen, ground, count):
    base = [tuple(sorted(gen.choice(ground, size=int(gen.integers(1, 4)), replace=False).tolist()))
            for _ in range(count)]
    return hereditary_closure(base)


def test_membership_examples():
    assert member(Schreier(), (3, 4, 5)) and not member(Schreier(), (2, 4, 5))
    assert member(Schreier(), ()) and not member(Schreier(), (0,))
    assert all(member(Cube(2), s) for s in [(), (5,), (1, 9)])
    assert not member(Cube(2), (1, 2, 3))
    assert member(Product(Cube(2), Schreier()), (3, 4, 6, 7, 9, 10))
    assert not member(Product(Cube(2), Schreier()), (1, 2, 3))
    assert member(Restrict(Schreier(), (3, 4, 5)), (3, 4)) and not member(Restrict(Schreier(), (3, 4)), (5,))
    with pytest.raises(FamilyError):
        member(object(), ())


@given(st.frozensets(st.integers(1, 11), max_size=7).map(lambda s: tuple(sorted(s))))
def test_product_matches_composition_search(s):
    for left, right in [(Cube(2), Schreier()), (Schreier(), Schreier()), (Cube(1), Cube(3))]:
        assert member(Product(left, right), s) == product_ref(left, right, s)


@given(st.frozensets(st.integers(1, 10), max_size=6).map(lambda s: tuple(sorted(s))), st.data())
def test_product_heredity_on_samples(s, data):
    f = Product(Cube(2), Schreier())
    assert is_hereditary(f)
    if member(f, s):
        sub = data.draw(st.sets(st.sampled_from(s)) if s else st.just(set()))
        assert member(f, tuple(sorted(sub)))


def test_hereditary_product_is_closure():
    f = HereditaryProduct(Explicit([(), (1,), (2,), (1, 2)]), Cube(1), 4)
    prod = Product(f.left, f.right)
    closure = hereditary_closure(members(prod, range(4)))
    assert set(members(f, range(4))) == closure.sets


def test_projection_matches_preimage_search():
    gen = np.random.default_rng(5)
    for _ in range(40):
        gamma = tuple(sorted(gen.choice(range(1, 10), size=4, replace=False).tolist()))
        for base in (Schreier(), Cube(2), random_hereditary(gen, list(range(1, 10)), 4)):
            p = Projection(base, gamma)
            images = set()
            for u in members(base, range(gamma[-1] + 1)):
                images.add(tuple(sorted({fam.projection_map(gamma, x) for x in u})))
            for r in range(len(gamma) + 1):
                for t in itertools.combinations(gamma, r):
                    assert member(p, t) == (t in images)


def test_hereditary_closure():
    assert hereditary_closure([(0, 1)]).sorted_sets() == [(), (0,), (1,), (0, 1)]
    assert hereditary_closure([]).sets == frozenset()
    assert len(hereditary_closure([(2,), (0, 1)]).sets) == 5
    with pytest.raises(FamilyError):
        Explicit([(0, 1)])


@given(st.lists(st.frozensets(st.integers(0, 6), max_size=3), max_size=5),
       st.frozensets(st.integers(0, 6), max_size=3))
def test_closure_membership(base, t):
    t = tuple(sorted(t))
    assert member(hereditary_closure(base), t) == any(set(t) <= s for s in base)


def test_large_window():
    assert is_large_window(Schreier(), range(5, 13), 3)
    assert not is_large_window(Cube(2), range(10), 3)
    assert is_large_window(Explicit([()]), (), 0)
    for n in range(5):
        assert is_large_window(Schreier(), range(2, 6), n) == any(
            member(Schreier(), s) for s in itertools.combinations(range(2, 6), n))


def test_cb_rank_symbolic():
    assert cb_rank(Cube(4)) == 4
    assert cb_rank(Schreier()) == OMEGA
    assert cb_rank(Product(Cube(2), Schreier())) == OMEGA
    assert cb_rank(Product(Schreier(), Schreier())) == CnfOrdinal.omega_power(2)
    assert cb_rank(Product(Cube(2), Cube(3))) == 6
    assert cb_rank(Restrict(Schreier(), (2, 3, 4, 5))) == 3  # {3,4,5} is the longest member
    with pytest.raises(FamilyError):
        cb_rank(Projection(Schreier(), (1, 2)))
    with pytest.raises(FamilyError):
        derivative_rank([])


def test_cb_rank_explicit_matches_recursive_rank():
    gen = np.random.default_rng(2)
    for _ in range(100):
        f = random_hereditary(gen, list(range(7)), int(gen.integers(1, 6)))
        assert cb_rank(f) == rank_ref(f.sets)


def test_ramsey_numbers():
    assert ramsey_number(2, 3, 2) == 6
    assert ramsey_number(1, 3, 2) == 5
    assert ramsey_number(2, 2, 3) == 2
    with pytest.raises(FamilyError):
        ramsey_number(2, 3, 4)


def test_homogeneous_extract():
    c = lambda t: 0
    assert homogeneous_extract(c, range(5), 3) == (0, 1, 2)
    parity = lambda t: t[0] % 2 if t else 0
    v = homogeneous_extract(parity, range(10), 2)
    assert len(v) == 2 and is_homogeneous(parity, v, 2)
    # R(2,3,4) = 62 is the caller-supplied threshold here
    gen = np.random.default_rng(3)
    table = {p: int(gen.integers(0, 2)) for p in itertools.combinations(range(62), 2)}
    col = lambda t: table[t] if len(t) == 2 else (t[0] % 2 if t else 0)
    v = homogeneous_extract(col, range(62), 2)
    assert is_homogeneous(col, v, 2)
    with pytest.raises(FamilyError):
        homogeneous_extract(lambda t: t[0] if t else 0, range(4), 2)


@given(st.integers(0, 2**16))
def test_homogeneous_extract_is_homogeneous(seed):
    gen = np.random.default_rng(seed)
    vals = gen.integers(0, 2, size=64)
    col = lambda t: int(vals[sum(1 << x for x in t) % 64]) if t else 0
    v = homogeneous_extract(col, range(12), 2)
    assert is_homogeneous(col, v, 2)


@pytest.mark.parametrize("n,m", [(1, 4), (2, 5), (3, 8), (2, 8)])
def test_ptak_cube_is_uniform(n, m):
    w = ptak_witness(Cube(n), range(m))
    assert w.bound == Fraction(n, m)
    assert verify_ptak(w, Cube(n), range(m)) == []


def test_ptak_singletons_and_errors():
    f = hereditary_closure([(g,) for g in range(6)])
    assert ptak_witness(f, range(6)).bound == Fraction(1, 6)
    with pytest.raises(FamilyError):
        ptak_witness(Cube(1), ())
    with pytest.raises(FamilyError):
        ptak_witness(Schreier(), range(0, 3))
    with pytest.raises(FamilyError):
        ptak_witness(Cube(2), range(4), eps=Fraction(1, 2))


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_ptak_schreier_against_scipy(k):
    a = list(range(k, 2 * k + 1))
    w = ptak_witness(Schreier(), a)
    assert verify_ptak(w, Schreier(), a) == []
    sets = maximal_members(Schreier(), a)
    m = len(a)
    A = [[1 if g in s else 0 for g in a] + [-1] for s in sets]
    ref = linprog([0] * m + [1], A_ub=A, b_ub=[0] * len(A), A_eq=[[1] * m + [0]], b_eq=[1],
                  bounds=[(0, None)] * (m + 1), method="highs")
    assert float(w.bound) == pytest.approx(ref.fun, abs=1e-9)


def test_schreier_norm_and_subsymmetry():
    assert schreier_norm({5: Fraction(1)}, Schreier()) == 1
    assert schreier_norm({2: Fraction(1), 3: Fraction(-1), 4: Fraction(1)}, Schreier()) == 2  # via {2, 4}
    assert schreier_norm({3: Fraction(1), 4: Fraction(1), 5: Fraction(1)}, Schreier()) == 3
    w = subsymmetry_witness(Schreier(), range(4, 12), range(8, 20))
    assert w.pairing_y == 1
    assert w.norm_x == ptak_witness(Schreier(), range(4, 12)).bound
    assert member(Schreier(), w.s) and len(w.s) == len(w.x)


def test_theta_free():
    assert theta_free_check(lambda t: (), (0, 1, 2))
    assert not theta_free_check(lambda t: (0,), (0, 1))
    assert theta_free_check(lambda t: (0,), (1, 2))
    assert theta_free_check(lambda t: t, (3, 4, 5))


@pytest.mark.parametrize("text", ["cube(3)", "schreier", "product(cube(2),schreier)",
                                  "restrict(schreier,[3,4,5,6])", "project(schreier,[2,4,6,8])",
                                  "hproduct(cube(1),cube(2),6)"])
def test_parse_round_trip(text):
    assert fam.describe(parse_family(text)) == text


def test_parse_explicit_file(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps([[], [1], [2], [1, 2]]))
    f = parse_family(f"explicit:@{p}")
    assert isinstance(f, Explicit) and len(f.sets) == 4
    for bad in ["cube(", "wat(1)", "cube(2) x", "restrict(schreier,[1,)"]:
        with pytest.raises(FamilyError):
            parse_family(bad)
