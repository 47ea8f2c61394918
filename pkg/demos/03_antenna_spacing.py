"""
How many antennas fit on a ring
===============================

For a coaxial link the subchannel gains get more uneven as antennas are
packed closer.  Capping their variance at 0.01 fixes the largest usable
antenna count for each radius; the spacing between neighbours then settles
near 1.6 to 1.7 wavelengths.
"""

# %%
import numpy as np

from ucamimo.presets import SPACING_RADII_OVER_LAMBDA, spacing_base
from ucamimo.simulate import spacing_search

base = spacing_base()
lam = base.wavelength
print(f"link distance {base.d_centers} m, wavelength {lam} m")

# %%
# Half-wavelength steps
# ---------------------
pts = spacing_search([r * lam for r in SPACING_RADII_OVER_LAMBDA], 0.01, base)
print(" R/lambda   N   spacing/lambda   sigma^2")
for p in pts:
    print(f"{p.radius / lam:8.1f} {p.best_count:4d}   {p.spacing / lam:10.3f}   {p.sigma_sq:.4f}")

# %%
# Finer sampling
# --------------
# Between the half-wavelength points the count moves in integer jumps, so the
# spacing saws up and down around the plateau.
fine = spacing_search(np.arange(2.0, 3.01, 0.1) * lam, 0.01, base)
print([round(p.spacing / lam, 2) for p in fine])
