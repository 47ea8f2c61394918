"""Line-of-sight channel matrices, the circulant model and its phase compensation.

The exact channel uses free-space amplitude and phase on each path::

    h_mn = beta * wavelength / (4 pi d_mn) * exp(-j 2 pi d_mn / wavelength)

Expanding d_mn to first order splits its phase into a receive-only term, a
transmit-only term and a term that depends only on (n - m) mod N.  The first
two are removed by unit-modulus diagonal beamformers; what is left is a
circulant matrix that the DFT diagonalises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import LinkConfig, exact_distances, reference_distance

__all__ = [
    "ChannelMatrix",
    "CirculantChannel",
    "CompensationPair",
    "exact_channel",
    "circulant_channel",
    "circulant_from_first_row",
    "compensation_pair",
    "compensation_candidates",
    "model_channel",
    "circulant_residual",
    "dft_eigenvalues",
    "eigenvalue_spread",
    "approximation_variance",
]


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Exact M x N channel; ``entries[m-1, n-1]`` couples transmit n to receive m."""

    entries: np.ndarray
    config: LinkConfig

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))
        if self.entries.shape != (self.config.n_rx, self.config.n_tx):
            raise ValueError(
                f"entries shape {self.entries.shape} does not match "
                f"(n_rx, n_tx) = ({self.config.n_rx}, {self.config.n_tx})"
            )


@dataclass(frozen=True, eq=False)
class CirculantChannel:
    """Circulant channel model.

    Row ``m`` of ``matrix`` is ``first_row`` cyclically shifted right by ``m``
    places.  ``eigenvalues[k]`` is the gain of subchannel ``k`` once the
    modulation transform and its adjoint are applied on either side.
    """

    first_row: np.ndarray
    matrix: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self) -> None:
        for name in ("first_row", "matrix", "eigenvalues"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def size(self) -> int:
        return self.first_row.shape[0]


@dataclass(frozen=True, eq=False)
class CompensationPair:
    """Diagonals of the transmit (gamma) and receive (delta) phase beamformers."""

    gamma: np.ndarray
    delta: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", _frozen(self.gamma))
        object.__setattr__(self, "delta", _frozen(self.delta))


def _require_square(cfg: LinkConfig) -> None:
    if cfg.n_tx != cfg.n_rx:
        raise ValueError(
            f"beamforming needs as many receive as transmit antennas "
            f"(n_tx={cfg.n_tx}, n_rx={cfg.n_rx})"
        )


def _path_gain(cfg: LinkConfig, distance):
    return cfg.beta * cfg.wavelength / (4.0 * math.pi * distance)


def exact_channel(cfg: LinkConfig) -> ChannelMatrix:
    d_mn = exact_distances(cfg)
    h = _path_gain(cfg, d_mn) * np.exp(-2j * math.pi * d_mn / cfg.wavelength)
    return ChannelMatrix(h, cfg)


def dft_eigenvalues(sequence) -> np.ndarray:
    """Unnormalised N-point DFT, sum_n c_n exp(-j 2 pi n k / N)."""
    sequence = np.asarray(sequence, dtype=complex)
    if sequence.ndim != 1 or sequence.size == 0:
        raise ValueError("sequence must be a non-empty 1-D array")
    return np.fft.fft(sequence)


def circulant_from_first_row(first_row) -> CirculantChannel:
    """Build the right-shift circulant matrix and its subchannel gains.

    With the modulation transform W[n, l] = exp(+j 2 pi n l / N) / sqrt(N),
    ``W^H C W`` is diagonal with entries equal to the DFT of the first
    *column* of C.  For the symmetric sequences produced by aligned arrays the
    first column and first row have the same DFT.
    """
    c = np.asarray(first_row, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("first_row must be a non-empty 1-D array")
    n = c.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    matrix = c[idx]
    return CirculantChannel(c, matrix, dft_eigenvalues(matrix[:, 0]))


def circulant_channel(cfg: LinkConfig) -> CirculantChannel:
    """Circulant part of the first-order channel, with common amplitude beta*lambda/(4 pi D)."""
    _require_square(cfg)
    D = reference_distance(cfg)
    psi = cfg.tx_phases
    vphi1 = cfg.rx_phases[0]
    path = D - cfg.r_tx * cfg.r_rx * np.cos(psi - vphi1) / D
    first_row = _path_gain(cfg, D) * np.exp(-2j * math.pi * path / cfg.wavelength)
    return circulant_from_first_row(first_row)


def _tilt_phases(cfg: LinkConfig) -> tuple[np.ndarray, np.ndarray]:
    D = reference_distance(cfg)
    scale = 2.0 * math.pi * cfg.d_centers * math.sin(cfg.phi) / (cfg.wavelength * D)
    tx = scale * cfg.r_tx * np.cos(cfg.tx_phases - cfg.theta)
    rx = scale * cfg.r_rx * np.cos(cfg.rx_phases - cfg.theta)
    return tx, rx


def compensation_candidates(cfg: LinkConfig) -> dict[tuple[int, int], CompensationPair]:
    """All four sign choices for the transmit and receive phase factors.

    Keys are ``(tx_sign, rx_sign)``; ``gamma = exp(j tx_sign * tx_phase)`` and
    ``delta = exp(j rx_sign * rx_phase)``.
    """
    _require_square(cfg)
    tx, rx = _tilt_phases(cfg)
    return {
        (a, b): CompensationPair(np.exp(1j * a * tx), np.exp(1j * b * rx))
        for a in (1, -1)
        for b in (1, -1)
    }


# Frozen from the residual comparison over compensation_candidates; see
# tests/test_channel.py::test_frozen_signs_minimise_residual.
_TX_SIGN = 1
_RX_SIGN = -1


def compensation_pair(cfg: LinkConfig) -> CompensationPair:
    """Phase beamformers that turn the first-order channel into the circulant model.

    ``conj(delta)[:, None] * H_taylor * conj(gamma)[None, :]`` equals
    ``circulant_channel(cfg).matrix`` exactly.
    """
    _require_square(cfg)
    tx, rx = _tilt_phases(cfg)
    return CompensationPair(np.exp(1j * _TX_SIGN * tx), np.exp(1j * _RX_SIGN * rx))


def model_channel(circ: CirculantChannel, pair: CompensationPair) -> np.ndarray:
    """Delta @ circulant @ Gamma, the channel the beamformers are designed for."""
    return pair.delta[:, None] * circ.matrix * pair.gamma[None, :]


def circulant_residual(a) -> float:
    """Relative Frobenius distance from ``a`` to its best circulant fit.

    The fit averages each wrapped diagonal, which is the least-squares
    circulant approximation.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    rows = np.arange(n)[:, None]
    shift = np.arange(n)[None, :]
    diag = a[rows, (rows + shift) % n]  # diag[m, k] = a[m, m+k]
    fit = circulant_from_first_row(diag.mean(axis=0)).matrix
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(a - fit) / norm)


def eigenvalue_spread(eigenvalues) -> float:
    """Population variance of the eigenvalue magnitudes."""
    mags = np.abs(np.asarray(eigenvalues, dtype=complex))
    if mags.size == 0:
        raise ValueError("eigenvalues must be non-empty")
    return float(np.mean((mags - mags.mean()) ** 2))


def approximation_variance(
    exact: ChannelMatrix, pair: CompensationPair, circ: CirculantChannel
) -> float:
    """Discrepancy between the exact channel and its compensated circulant model.

    ``||H - Delta C Gamma||_F^2 / (N * ||Delta C Gamma||_F^2)``
    """
    h = exact.entries
    n = circ.size
    if h.shape != (n, n) or pair.gamma.shape != (n,) or pair.delta.shape != (n,):
        raise ValueError(
            f"dimension mismatch: H {h.shape}, circulant {n}, "
            f"gamma {pair.gamma.shape}, delta {pair.delta.shape}"
        )
    model = model_channel(circ, pair)
    err = np.sum(np.abs(h - model) ** 2)
    return float(err / (n * np.sum(np.abs(model) ** 2)))
