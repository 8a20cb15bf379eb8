"""Map of ln T while one well of a six-barrier train is widened.

Each row fixes the fourth well at tau' and keeps the other four wells at
width 1.  The widened well's own states march down the hyperbolas
kappa = n*pi/tau' (overlaid); the unit wells pin vertical features that do
not move with tau'.  The same grid is also written as a portable graymap
with a sidecar describing the axes.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from stairwell.scan import emit, overlay_hyperbolas, scan_single_well

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

KAPPA_AXIS = (0.05, 7.6, 900)
TAU_AXIS = (1.0, 5.0, 220)

grid = scan_single_well(6, 40.0, 1.0, 1.0, 4, TAU_AXIS, KAPPA_AXIS)
print(f"grid {grid.values.shape[0]} x {grid.values.shape[1]}, "
      f"ln T in [{grid.values.min():.1f}, {grid.values.max():.1f}]")

fig, ax = plt.subplots(figsize=(7.5, 4.5))
im = ax.imshow(
    grid.values,
    origin="lower",
    aspect="auto",
    extent=(KAPPA_AXIS[0], KAPPA_AXIS[1], TAU_AXIS[0], TAU_AXIS[1]),
    cmap="gray",
    vmin=max(grid.values.min(), -60.0),
    vmax=0.0,
)
for curve in overlay_hyperbolas(KAPPA_AXIS, TAU_AXIS, n_max=10):
    if curve.size:
        ax.plot(curve[:, 0], curve[:, 1], lw=0.6, color="deepskyblue", alpha=0.8)
fig.colorbar(im, ax=ax, label="ln T")
ax.set_xlabel("kappa")
ax.set_ylabel("tau' (width of well 4)")
ax.set_title("Six barriers, one widened well")
fig.tight_layout()
png = os.path.join(OUT, "widened_well_scan.png")
fig.savefig(png, dpi=150)
print("wrote", png)

pgm = os.path.join(OUT, "widened_well_scan.pgm")
emit(grid, "raster", pgm)
print("wrote", pgm, "and", pgm + ".txt")
