"""Antenna placement and path lengths for a pair of parallel uniform circular arrays.

The transmit UCA lies in the z = 0 plane, centred on the origin.  The receive
UCA lies in a parallel plane; its centre sits at distance ``d_centers`` from the
origin along the direction given by the polar tilt ``phi`` (measured from the
transmit array normal) and the azimuth ``theta``.

Antennas are numbered from 1, so transmit antenna ``n`` sits at phase
``2*pi*(n-1)/N + alpha_tx`` on its circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

__all__ = [
    "ConfigError",
    "LinkConfig",
    "Position3",
    "antenna_positions",
    "exact_distance",
    "exact_distances",
    "reference_distance",
    "taylor_distance",
    "taylor_distances",
    "neighbor_spacing",
]

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Raised when a link description violates its invariants."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class Position3(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class LinkConfig:
    """Geometric and physical description of one transmit/receive UCA pair.

    Lengths are in metres and angles in radians.

    Parameters
    ----------
    n_tx, n_rx : int
        Number of transmit (N) and receive (M) antennas.
    r_tx, r_rx : float
        Transmit and receive array radii.
    d_centers : float
        Distance between the two array centres.
    wavelength : float
        Carrier wavelength.
    beta : float
        Channel amplitude constant.
    theta : float
        Azimuth of the centre-to-centre line projected onto the transmit plane.
    phi : float
        Tilt of the centre-to-centre line away from the transmit array normal.
        ``phi == 0`` is the coaxial case.
    alpha_tx, alpha_rx : float
        Phase of the first antenna on each array.
    """

    n_tx: int
    n_rx: int
    r_tx: float
    r_rx: float
    d_centers: float
    wavelength: float
    beta: float = 4.0 * math.pi
    theta: float = 0.0
    phi: float = 0.0
    alpha_tx: float = 0.0
    alpha_rx: float = 0.0

    def __post_init__(self) -> None:
        for name in ("n_tx", "n_rx"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ConfigError(name, f"must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("r_tx", "r_rx", "d_centers", "wavelength", "beta"):
            value = float(getattr(self, name))
            # a zero radius is a single antenna at the array centre
            lower_ok = value >= 0.0 if name in ("r_tx", "r_rx") else value > 0.0
            if not math.isfinite(value) or not lower_ok:
                raise ConfigError(name, f"must be a finite positive number, got {value!r}")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.phi < math.pi / 2:
            raise ConfigError("phi", f"must lie in [0, pi/2), got {self.phi!r}")
        for name in ("theta", "alpha_tx", "alpha_rx"):
            value = float(getattr(self, name))
            if not 0.0 <= value < TWO_PI:
                raise ConfigError(name, f"must lie in [0, 2*pi), got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "phi", float(self.phi))
        if self.d_centers <= self.r_tx + self.r_rx:
            raise ConfigError(
                "d_centers",
                f"must exceed r_tx + r_rx = {self.r_tx + self.r_rx!r}, got {self.d_centers!r}",
            )

    def with_(self, **changes) -> "LinkConfig":
        """Return a validated copy with some fields replaced."""
        return replace(self, **changes)

    @property
    def tx_phases(self) -> np.ndarray:
        """Angular positions psi_n of the transmit antennas."""
        return TWO_PI * np.arange(self.n_tx) / self.n_tx + self.alpha_tx

    @property
    def rx_phases(self) -> np.ndarray:
        """Angular positions of the receive antennas."""
        return TWO_PI * np.arange(self.n_rx) / self.n_rx + self.alpha_rx

    @property
    def rx_center(self) -> np.ndarray:
        sp = math.sin(self.phi)
        return self.d_centers * np.array(
            [sp * math.cos(self.theta), sp * math.sin(self.theta), math.cos(self.phi)]
        )


def _positions_array(cfg: LinkConfig, side: str) -> np.ndarray:
    if side == "transmit":
        ang = cfg.tx_phases
        return np.column_stack(
            [cfg.r_tx * np.cos(ang), cfg.r_tx * np.sin(ang), np.zeros_like(ang)]
        )
    if side == "receive":
        ang = cfg.rx_phases
        ring = np.column_stack(
            [cfg.r_rx * np.cos(ang), cfg.r_rx * np.sin(ang), np.zeros_like(ang)]
        )
        return cfg.rx_center + ring
    raise ValueError(f"side must be 'transmit' or 'receive', got {side!r}")


def antenna_positions(cfg: LinkConfig, side: str) -> list[Position3]:
    """Cartesian antenna coordinates for one side of the link, antenna 1 first."""
    return [Position3(*map(float, p)) for p in _positions_array(cfg, side)]


def _check_index(name: str, value: int, upper: int) -> None:
    if not 1 <= value <= upper:
        raise IndexError(f"{name}={value} out of range 1..{upper}")


def exact_distances(cfg: LinkConfig) -> np.ndarray:
    """All path lengths as an (M, N) array; entry [m-1, n-1] is d_mn."""
    rx = _positions_array(cfg, "receive")
    tx = _positions_array(cfg, "transmit")
    return np.linalg.norm(rx[:, None, :] - tx[None, :, :], axis=-1)


def exact_distance(cfg: LinkConfig, m: int, n: int) -> float:
    """Euclidean distance from transmit antenna ``n`` to receive antenna ``m``."""
    _check_index("m", m, cfg.n_rx)
    _check_index("n", n, cfg.n_tx)
    return float(exact_distances(cfg)[m - 1, n - 1])


def reference_distance(cfg: LinkConfig) -> float:
    """Expansion point sqrt(d^2 + r^2 + R^2) shared by every antenna pair."""
    return math.sqrt(cfg.d_centers**2 + cfg.r_tx**2 + cfg.r_rx**2)


def taylor_distances(cfg: LinkConfig) -> np.ndarray:
    """First-order expansion of every d_mn about the reference distance, shape (M, N)."""
    d, r, R = cfg.d_centers, cfg.r_tx, cfg.r_rx
    D = reference_distance(cfg)
    sp = math.sin(cfg.phi)
    psi = cfg.tx_phases[None, :]
    vphi = cfg.rx_phases[:, None]
    cross = (
        d * R * sp * np.cos(vphi - cfg.theta)
        - d * r * sp * np.cos(psi - cfg.theta)
        - r * R * np.cos(psi - vphi)
    )
    return D + cross / D


def taylor_distance(cfg: LinkConfig, m: int, n: int) -> float:
    _check_index("m", m, cfg.n_rx)
    _check_index("n", n, cfg.n_tx)
    return float(taylor_distances(cfg)[m - 1, n - 1])


def neighbor_spacing(radius: float, count: int) -> float:
    """Chord length between adjacent antennas of a ``count``-element UCA."""
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    return 2.0 * radius * math.sin(math.pi / count)
