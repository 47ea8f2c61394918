"""Named link configurations used by the CLI, the demos and the acceptance checks."""

from __future__ import annotations

import math

import numpy as np

from .geometry import LinkConfig

__all__ = ["tilted_link", "spacing_base", "SPACING_DISTANCE", "SPACING_RADII_OVER_LAMBDA", "PRESETS"]

WAVELENGTH = 0.01

# Link distance for the spacing search.  0.215 m (21.5 wavelengths) gives a
# neighbour spacing of about 1.5 to 1.7 wavelengths for radii of 2 to 6
# wavelengths sampled every half wavelength.  At the 4 m distance of the
# tilted link the eigenvalue spread stays below 0.01 for every count up to
# 256, so the search has nothing to bound.
SPACING_DISTANCE = 0.215
SPACING_RADII_OVER_LAMBDA = tuple(np.arange(2.0, 6.0 + 1e-9, 0.5))


def tilted_link(n: int) -> LinkConfig:
    """Tilted link with ``n`` antennas on each side.

    r = R = 0.1 m, d = 4 m, phi = pi/6, theta = 0, lambda = 0.01 m, beta = 4 pi.
    """
    return LinkConfig(
        n_tx=n,
        n_rx=n,
        r_tx=0.1,
        r_rx=0.1,
        d_centers=4.0,
        theta=0.0,
        phi=math.pi / 6,
        alpha_tx=0.0,
        alpha_rx=0.0,
        wavelength=WAVELENGTH,
        beta=4 * math.pi,
    )


def spacing_base() -> LinkConfig:
    """Coaxial link used by the spacing search; radii and counts are overridden."""
    return LinkConfig(
        n_tx=2,
        n_rx=2,
        r_tx=WAVELENGTH,
        r_rx=WAVELENGTH,
        d_centers=SPACING_DISTANCE,
        wavelength=WAVELENGTH,
        beta=4 * math.pi,
    )


PRESETS = {
    "tilted-n4": lambda: tilted_link(4),
    "tilted-n6": lambda: tilted_link(6),
    # long-form aliases of the two tilted links
    "paper-fig4-n4": lambda: tilted_link(4),
    "paper-fig4-n6": lambda: tilted_link(6),
    "spacing": spacing_base,
}
