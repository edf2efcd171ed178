"""
ρ-tables, the f_i recursion and the c_n colouring
=================================================

Build a two-level stack of ρ-tables, look at the family B_2 it defines on a
small ground set, and audit c_2 against the "not in 2-Δ-position" edges.
"""

from finitary.positional import (FiTable, cn_color, cn_sample, equal_color_delta_profile,
                                 good_coloring_audit, not_in_delta_position)
from finitary.rho import build_stack, synthesize_rho, verify_rho

table = synthesize_rho(5, 4)
print("ρ on 5 points with", table.range_size, "colours, violations:", verify_rho(table))

stack = build_stack(2, 10, rng=3)
ft = FiTable(stack)
sample = cn_sample(ft, range(10))
print(len(sample.vertices), "members of B_2 inside 0..9")

# c_n is a table of f_n values over the (n+1)-subsets, plus the size
print("c_2({0,2,5,7}) =", cn_color((0, 2, 5, 7), ft))

bad = good_coloring_audit(sample, not_in_delta_position(2))
print("same colour, not in 2-Δ-position:", len(bad))
print("largest minimal Δ-parameter among equal colours:", equal_color_delta_profile(sample))
