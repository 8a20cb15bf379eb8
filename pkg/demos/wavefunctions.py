"""Wave profiles on and off resonance in a four-barrier train.

On a resonance the wave builds up inside the wells and leaves the far side
at full strength; a short distance away in energy the same train reflects
almost everything.  |psi| is scaled to the barrier height so both can be
drawn over the potential outline.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from stairwell.potential import MbpSpec, build_mbp
from stairwell.scattering import solve, wavefunction

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

spec = MbpSpec(4, 40.0, 0.5, (2.0, 2.0, 2.0))
pot = build_mbp(spec)
V0 = spec.barrier_height

# 5.2143 is a located resonance of this train; 4.80 sits between bands.
CASES = (("on resonance", 5.2143), ("off resonance", 4.80))

xs = np.linspace(-3.0, 11.0, 4000)
fig, axes = plt.subplots(2, 1, figsize=(7.5, 6), sharex=True)
for ax, (label, kappa) in zip(axes, CASES):
    sol = solve(pot, kappa**2)
    psi = wavefunction(sol, xs)
    scale = V0 / np.abs(psi).max()
    ax.stairs(pot.levels[1:-1], pot.breakpoints, fill=True,
              color="lightsteelblue", alpha=0.7)
    ax.plot(xs, np.abs(psi) * scale, lw=1.0, color="crimson",
            label=f"|psi| (scaled), T = {sol.transmission:.3f}")
    ax.plot(xs, psi.real * scale, lw=0.6, color="gray", alpha=0.8)
    ax.set_ylabel("V(x), |psi|")
    ax.set_title(f"{label}: kappa = {kappa:g}")
    ax.legend(loc="upper right", fontsize=8)
axes[-1].set_xlabel("x")
fig.tight_layout()
path = os.path.join(OUT, "wavefunctions.png")
fig.savefig(path, dpi=150)
print("wrote", path)
