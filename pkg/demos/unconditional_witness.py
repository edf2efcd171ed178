"""
A basic sequence that is far from unconditional
===============================================

Generate an instance carrying a special sequence of length k, then compare
the alternating sum x with its even part y.  ‖x‖ stays below 4 while ‖y‖
grows like k/2.
"""

from finitary.mr_norm import generate_instance, unconditionality_witness

for k in (2, 4, 8, 16):
    inst = generate_instance(k, n=1, rng=k)
    x, y, rep = unconditionality_witness(inst, k=k)
    print(f"k={k:2d}  ground ≈ 2^{inst.ground.bit_length()}  ‖x‖ ≤ {float(rep.x_norm.hi):.4f}"
          f"  ‖y‖ ≥ {float(rep.y_norm.lo):.1f}  ratio ≥ {float(rep.suppression_lower):.3f}"
          f"  ({len(rep.chain)} functionals checked)")

worst = max(rep.chain, key=lambda e: e.value)
print("largest |<g, x>| for k=16:", float(worst.value),
      "split as", [float(v) for v in (worst.A, worst.B, worst.C_diag, worst.C_cross)])
