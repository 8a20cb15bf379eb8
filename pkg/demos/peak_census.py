"""Peak census of a train with three different wells.

With well widths 5, 3 and 2 each well contributes its own ladder of
resonances: floor(tau * sqrt(V0) / pi) states below the barrier top, which
is 10 + 6 + 4 = 20 here.  A few diffuse humps sit just above the top where
the states are no longer bound; they are classified separately.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from stairwell.potential import MbpSpec, build_mbp
from stairwell.resonance import find_peaks, peak_count
from stairwell.scattering import transmission_curve

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

spec = MbpSpec(4, 40.0, 0.5, (5.0, 3.0, 2.0))
pot = build_mbp(spec)
top = math.sqrt(spec.barrier_height)

catalog = find_peaks(pot)
sharp = sorted(catalog.sharp_peaks(), key=lambda p: p.kappa)
diffuse = sorted(catalog.diffuse_peaks(), key=lambda p: p.kappa)
print(f"counting rule: {peak_count(spec.well_widths, spec.barrier_height)} "
      f"sharp peaks expected, {len(sharp)} found")
print(f"{len(diffuse)} diffuse peaks above the top:",
      ", ".join(f"{p.kappa:.4f}" for p in diffuse))

kappas = np.linspace(0.3, 1.2 * top, 8000)
ln_t, _, _ = transmission_curve(pot, kappas)

fig, ax = plt.subplots(figsize=(8, 4.2))
ax.plot(kappas, ln_t, lw=0.8)
ax.plot([p.kappa for p in sharp], [p.ln_t for p in sharp], "v", ms=6,
        color="crimson", label=f"{len(sharp)} sharp")
ax.plot([p.kappa for p in diffuse], [p.ln_t for p in diffuse], "o", ms=6,
        color="darkorange", label=f"{len(diffuse)} diffuse")
ax.axvspan(0.95 * top, 1.2 * top, color="gold", alpha=0.15)
ax.axvline(top, color="black", lw=1.0)
ax.set_xlabel("kappa")
ax.set_ylabel("ln T")
ax.set_title("Asymmetric train: wells 5, 3, 2")
ax.legend(loc="lower left")
fig.tight_layout()
path = os.path.join(OUT, "peak_census.png")
fig.savefig(path, dpi=150)
print("wrote", path)
