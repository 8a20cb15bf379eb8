"""Transmission through one rectangular barrier across the energy range.

Below the barrier top the wave tunnels and T grows monotonically; above it
T oscillates and touches 1 whenever the barrier width holds a whole number
of half wavelengths.  The crossing energy E = V0 is a regular point for the
solver (plane waves degenerate inside the barrier, handled by a linear
basis), so the curve is smooth through it.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from stairwell.potential import MbpSpec, build_mbp
from stairwell.scattering import solve, transmission_curve

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

V0, DELTA = 40.0, 0.5
pot = build_mbp(MbpSpec(1, V0, DELTA))

energies = np.linspace(0.1, 120.0, 1200)
_, t, _ = transmission_curve(pot, np.sqrt(energies))

at_top = solve(pot, V0).transmission
print(f"T at the crossing energy E = V0: {at_top:.6f} "
      f"(analytic limit {1.0 / (1.0 + V0 * DELTA**2 / 4.0):.6f})")

fig, ax = plt.subplots(figsize=(7, 4))
ax.plot(energies, t, lw=1.2)
ax.axvline(V0, color="gray", ls="--", lw=0.8)
ax.plot([V0], [at_top], "o", ms=5, color="crimson", zorder=3)
ax.annotate("E = V0", (V0, 0.05), xytext=(V0 + 4, 0.08), fontsize=9)
ax.set_xlabel("energy  (units 2M/hbar^2 = 1)")
ax.set_ylabel("T")
ax.set_title(f"Single barrier, V0 = {V0:g}, width {DELTA:g}")
ax.set_ylim(0, 1.02)
fig.tight_layout()
path = os.path.join(OUT, "single_barrier.png")
fig.savefig(path, dpi=150)
print("wrote", path)
