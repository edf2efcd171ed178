import itertools

from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def brute_delta(s, t, n):
    """Every split of s∩t into I < J with |J| ≤ n and I initial in both; the one with largest I."""
    common = sorted(set(s) & set(t))
    best = None
    for r in range(len(common) + 1):
        for I in itertools.combinations(common, r):
            J = tuple(x for x in common if x not in I)
            if len(J) > n or (I and J and max(I) >= min(J)):
                continue
            if all(tuple(sorted(u))[:len(I)] == I for u in (s, t)):
                if best is None or len(I) > len(best[0]):
                    best = (I, J)
    return best
