"""
Exact relative entropy of entanglement under phase damping
==========================================================

Sweeps the squeezing r and damping d = gamma t, prints a coarse table and,
when matplotlib is installed, saves the surface next to this script.
"""
import os

import numpy as np

from tmsv_decoherence import SweepConfig, run_sweep

cfg = SweepConfig(model="phase", r_grid=(0.0, 1.5, 16), d_grid=(0.0, 2.0, 21), trunc=100)
table = run_sweep(cfg)

rs = sorted({rec.r for rec in table.records})
ds = sorted({rec.d for rec in table.records})
surface = np.array([rec.value for rec in table.records]).reshape(len(rs), len(ds))

# Rows are r, columns a few values of d. Larger r loses entanglement faster.
cols = [0, 1, 2, 5, 10, 20]
print("r \\ d " + " ".join(f"{ds[c]:8.2f}" for c in cols))
for i, r in enumerate(rs[::3]):
    print(f"{r:5.2f} " + " ".join(f"{surface[3 * i, c]:8.4f}" for c in cols))

# Fraction of the initial entanglement left at d = 0.2.
k = ds.index(0.2)
for i in (1, 5, 10, 15):
    print(f"r = {rs[i]:.1f}: E_R(0.2)/E_R(0) = {surface[i, k] / surface[i, 0]:.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    R, D = np.meshgrid(rs, ds, indexing="ij")
    fig = plt.figure(figsize=(6, 4.5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(R, D, surface, cmap="viridis")
    ax.set_xlabel("r")
    ax.set_ylabel("d")
    ax.set_zlabel("E_R (bits)")
    out = os.path.splitext(__file__)[0] + ".png"
    fig.savefig(out, dpi=120)
    print("wrote", out)
