"""
Upper bound on entanglement under thermal amplitude damping
===========================================================

The convexity bound E_R* for two bath temperatures, together with the
separability border d*(r) beyond which the state has no entanglement.
"""
import numpy as np

from tmsv_decoherence import AmplitudePoint, block_decomposition, emit_border, upper_bound_er

# Block structure at one point: weights fall off geometrically with k.
dec = block_decomposition(AmplitudePoint(1.0, 0.5, 0.1), 100)
print(f"p0 = {dec.p0:.6f}, blocks kept = {dec.k_cutoff}, trace deficit = {dec.trace_deficit:.1e}")
print("p_k for k = 1..5:", np.array(dec.weights[:5]))

# E_R* along d for a fixed squeezing, and where it stands at the border.
for nbar in (0.01, 0.1):
    border = {row.r: row.d_star for row in emit_border((0.0, 1.0, 11), nbar)}
    print(f"\nnbar = {nbar}")
    print(f"{'r':>4} {'E_R*(0)':>9} {'E_R*(0.5)':>10} {'d*':>7} {'E_R*(d*)':>10}")
    for r in (0.2, 0.5, 1.0):
        values = [upper_bound_er(AmplitudePoint(r, d, nbar)).value for d in (0.0, 0.5, border[r])]
        print(f"{r:4.1f} {values[0]:9.4f} {values[1]:10.4f} {border[r]:7.3f} {values[2]:10.5f}")
