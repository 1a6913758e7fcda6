"""
Entanglement of the undamped squeezed vacuum
============================================

The closed-form entropy against the Shannon entropy of the truncated
photon-number distribution, and how quickly the truncation converges.
"""
import numpy as np

from tmsv_decoherence import pure_entanglement_bits, schmidt_distribution, shannon_entropy_bits
from tmsv_decoherence.tmsv import minimal_truncation

# Closed form and truncated series side by side.
print(f"{'r':>4} {'closed form':>14} {'series N=100':>14} {'N for 1e-12':>12}")
for r in np.linspace(0.0, 1.5, 7):
    series = shannon_entropy_bits(schmidt_distribution(r, 100, tail_ceiling=1.0).probs,
                                  check_normalization=False)
    print(f"{r:4.2f} {pure_entanglement_bits(r):14.9f} {series:14.9f} "
          f"{minimal_truncation(r, 1e-12):12d}")

# The photon-number distribution is geometric with ratio tanh^2 r.
dist = schmidt_distribution(1.0, 60)
print("\nr = 1: p_0 =", dist.probs[0], " p_1/p_0 =", dist.probs[1] / dist.probs[0])
