"""
Tsirelson norms over Schreier and cube families
===============================================

Exact rational norms, the projection identity, and the two Bellenot regimes.
"""

from fractions import Fraction

from finitary.families import Cube, Schreier
from finitary.tsirelson import TNormInstance, bellenot_profile, projection_check, t_norm

half = Fraction(1, 2)
S = TNormInstance(half, Schreier())

print("‖u3+u4+u5‖ =", t_norm({3: 1, 4: 1, 5: 1}, S))
print("‖u1+u2‖    =", t_norm({1: 1, 2: 1}, S))

x = {4: Fraction(1), 6: Fraction(-2, 3), 8: Fraction(1, 2)}
print("projection onto the evens:", projection_check(x, S, range(2, 13, 2)))

# θn = 1 stays bounded, θn = 2 grows like m^(1/2)
for n in (2, 4):
    rows = bellenot_profile(half, n, 32)
    print(f"n={n}:", " ".join(f"{r.m}:{r.norm}" for r in rows if r.m in (1, 2, 4, 8, 16, 32)))
