"""Reordering the wells of a train leaves its resonance census alone.

Five barriers enclose wells of widths {1, 2, 3, 4}.  Any rearrangement
keeps the same number of sharp peaks at nearly the same positions, because
each well contributes its own ladder of states; only the fine shape of each
peak changes.  Mirror-image orderings go further: they share the entire
transmission curve to machine precision (same train seen from the other
side).
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from stairwell.potential import MbpSpec, build_mbp
from stairwell.resonance import alias_audit
from stairwell.scattering import transmission_curve

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

ORDERS = [(1.0, 4.0, 2.0, 3.0), (3.0, 2.0, 1.0, 4.0), (3.0, 2.0, 4.0, 1.0)]

report = alias_audit(MbpSpec(5, 40.0, 0.5, ORDERS[0]), permutations=ORDERS)
print(report.render())

kappas = np.linspace(0.3, 6.4, 6000)
fig, ax = plt.subplots(figsize=(8, 4.2))
for order in ORDERS:
    ln_t, _, _ = transmission_curve(build_mbp(MbpSpec(5, 40.0, 0.5, order)), kappas)
    label = "wells " + "-".join(f"{w:g}" for w in order)
    ax.plot(kappas, ln_t, lw=0.7, alpha=0.8, label=label)
ax.set_xlabel("kappa")
ax.set_ylabel("ln T")
ax.set_title("Three orderings of the same well multiset")
ax.legend(loc="lower right", fontsize=8)
fig.tight_layout()
path = os.path.join(OUT, "well_order_alias.png")
fig.savefig(path, dpi=150)
print("wrote", path)
# The 1-4-2-3 and 3-2-4-1 traces coincide exactly: they are mirror images.
