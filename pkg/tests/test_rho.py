import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from finitary.positional import FiTable, f_eval
from finitary.rho import RhoTable, build_stack, is_valid, synthesize_rho, verify_rho


def brute_valid(N, values):
    """Direct reading of (a.1), corrected (a.2), (b), (c) over all triples."""
    r = lambda a, b: values[(min(a, b), max(a, b))]
    for a, b, c in itertools.combinations(range(N), 3):
        if r(a, c) > max(r(a, b), r(b, c)):
            return False
        if r(a, b) > max(r(a, c), r(b, c)):
            return False
        if r(a, c) == r(b, c) or r(a, b) == r(b, c):
            return False
    return True


def test_verify_examples():
    assert verify_rho(RhoTable(3, {(0, 1): 0, (0, 2): 1, (1, 2): 2})) == []
    bad = verify_rho(RhoTable(3, {(0, 1): 1, (0, 2): 0, (1, 2): 0}))
    assert any(v.kind == "b" and v.where == (0, 1, 2) for v in bad)
    assert verify_rho(RhoTable(2, {(0, 1): 0})) == []


def test_verify_agrees_with_brute_force_on_random_tables():
    gen = np.random.default_rng(4)
    for _ in range(1000):
        N = int(gen.integers(2, 7))
        M = int(gen.integers(1, 5))
        vals = {p: int(gen.integers(0, M)) for p in itertools.combinations(range(N), 2)}
        assert is_valid(RhoTable(N, vals)) == brute_valid(N, vals)


def _exists(N, M):
    pairs = list(itertools.combinations(range(N), 2))
    return any(brute_valid(N, dict(zip(pairs, v))) for v in itertools.product(range(M), repeat=len(pairs)))


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_synthesis_complete_against_exhaustive_oracle(N):
    for M in range(1, 5):
        got = synthesize_rho(N, M)
        assert (got is not None) == _exists(N, M)
        if got is not None:
            assert is_valid(got)


def test_synthesis_examples():
    assert synthesize_rho(2, 1).values == {(0, 1): 0}
    assert is_valid(synthesize_rho(3, 3))
    assert synthesize_rho(3, 1) is None
    t = synthesize_rho(5, 4)
    assert is_valid(t) and t.range_size == 4


def test_seeded_synthesis_is_reproducible():
    a = synthesize_rho(6, 6, rng=11)
    b = synthesize_rho(6, 6, rng=11)
    assert a == b and is_valid(a)


@given(st.integers(3, 6), st.integers(0, 2**16), st.data())
def test_restriction_stays_valid(N, seed, data):
    t = synthesize_rho(N, N + 1, rng=seed)
    pts = data.draw(st.lists(st.sampled_from(range(N)), unique=True, min_size=2))
    assert is_valid(t.restrict(sorted(pts)))


def test_json_round_trip():
    t = synthesize_rho(4, 4)
    assert RhoTable.from_json(t.to_json()) == t


def test_table_lookup_errors():
    t = RhoTable(3, {(0, 1): 0, (0, 2): 1, (1, 2): 2})
    assert t(2, 0) == 1
    with pytest.raises(ValueError):
        t(1, 1)


def test_stacks():
    s = build_stack(1, 2)
    assert len(s.tables) == 1 and s.tables[0].N == 2
    s = build_stack(1, 6, rng=0)
    assert is_valid(s.tables[0])
    s = build_stack(2, 5, rng=1)
    ft = FiTable(s)
    for tup in itertools.combinations(range(5), 3):
        v = f_eval(ft, 2, tup)
        assert v is None or v < s.tables[1].range_size
