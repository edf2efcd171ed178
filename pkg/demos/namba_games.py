"""
The ordinal-picking game on a finite arena
==========================================

Who wins, with what strategy, and what the strategy says about the family.
"""

from finitary import families as fam
from finitary.namba import alpha, closed_set, lemma_I_check, replay, solve

for k in range(1, 5):
    print(f"α(Cube({k})) on 12 points:", alpha(fam.Cube(k), 12, 6))

print("α(Schreier) on 10, 20, 40 points:", [alpha(fam.Schreier(), N, 20) for N in (10, 20, 40)])

winner, sigma = solve(fam.Schreier(), 20, 3)
print("Schreier, 3 rounds on 20 points:", winner, "opens with", sigma(()))
print("lines where the strategy loses:", replay(sigma, fam.Schreier(), 20, 3))

C = closed_set(sigma, 20, 3)
print("a set closed under it:", C)
print("lemma check:", lemma_I_check(fam.Schreier(), 20, 2).violations)
