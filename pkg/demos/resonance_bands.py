"""Resonance bands of a uniform four-barrier train.

Three identical wells couple, so every single-well resonance splits into a
band of three narrow peaks.  The infinite-well positions n*pi/tau (dashed)
frame the true peaks from above; the gap widens near the barrier top where
the states are shallow.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from stairwell.potential import MbpSpec, build_mbp
from stairwell.resonance import estimates, find_peaks
from stairwell.scattering import transmission_curve

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

spec = MbpSpec(4, 40.0, 0.5, (2.0, 2.0, 2.0))
pot = build_mbp(spec)
top = math.sqrt(spec.barrier_height)

kappas = np.linspace(0.3, 6.6, 6000)
ln_t, _, _ = transmission_curve(pot, kappas)

catalog = find_peaks(pot)
sharp = sorted(catalog.sharp_peaks(), key=lambda p: p.kappa)
print(f"{len(sharp)} sharp peaks in {catalog.band_count_beta} bands of "
      f"{len(sharp) // catalog.band_count_beta}")
for p in sharp:
    print(f"  kappa = {p.kappa:.4f}   ln T = {p.ln_t:8.3f}   width = {p.width:.2e}")

fig, ax = plt.subplots(figsize=(8, 4.2))
ax.plot(kappas, ln_t, lw=0.8)
for est in estimates(spec.well_widths, spec.barrier_height, top):
    ax.axvline(est.kappa_estimate, color="gray", ls="--", lw=0.8)
ax.plot([p.kappa for p in sharp], [p.ln_t for p in sharp], "v", ms=6,
        color="crimson", label="located peaks")
ax.axvline(top, color="black", lw=1.0)
ax.annotate("sqrt(V0)", (top, ax.get_ylim()[0] * 0.95), fontsize=9, rotation=90)
ax.set_xlabel("kappa")
ax.set_ylabel("ln T")
ax.set_title("Uniform train: 4 barriers, wells tau = 2")
ax.legend(loc="lower right")
fig.tight_layout()
path = os.path.join(OUT, "resonance_bands.png")
fig.savefig(path, dpi=150)
print("wrote", path)
