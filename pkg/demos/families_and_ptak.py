"""
Products, ranks and Pták vectors
================================
"""

from finitary import families as fam

prod = fam.parse_family("product(cube(2),schreier)")
print(fam.describe(prod), "contains {3,4,6,7,9,10}:", fam.member(prod, (3, 4, 6, 7, 9, 10)))
print("ranks:", fam.cb_rank(prod), fam.cb_rank(fam.Product(fam.Schreier(), fam.Schreier())))

# best spread of mass against Schreier sets, with a dual certificate
for window in (range(1, 5), range(1, 9), range(1, 17)):
    w = fam.ptak_witness(fam.Schreier(), window)
    print(f"{window.start}..{window.stop - 1}: bound {w.bound}, dual {w.dual_value},",
          "certificate ok" if not fam.verify_ptak(w, fam.Schreier(), window) else "certificate broken")

sub = fam.subsymmetry_witness(fam.Schreier(), range(1, 9), range(8, 40))
print("‖x‖ =", sub.norm_x, " <y, 1_s> =", sub.pairing_y, " s =", sub.s)
