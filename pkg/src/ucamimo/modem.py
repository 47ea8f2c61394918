"""Channel-independent beamforming and maximum-likelihood detection.

Symbol vectors carry N constellation points, one per DFT bin, and are sent in
a single channel use.  All functions accept either one vector of shape (N,)
or a batch of shape (T, N); the antenna/bin axis is always the last one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Constellation",
    "bpsk",
    "qpsk",
    "psk",
    "qam",
    "get_constellation",
    "DftOperator",
    "DetectorCapError",
    "map_bits",
    "demap_bits",
    "modulate",
    "receive_transform",
    "fast_ml_detect",
    "traditional_ml_detect",
    "DEFAULT_HYPOTHESIS_CAP",
]

DEFAULT_HYPOTHESIS_CAP = 2**24


class DetectorCapError(RuntimeError):
    """Exhaustive ML search would exceed the configured hypothesis budget."""


def _gray(k: np.ndarray) -> np.ndarray:
    return k ^ (k >> 1)


@dataclass(frozen=True, eq=False)
class Constellation:
    """Alphabet of K unit-average-energy points.

    ``points[i]`` carries the bit label given by the binary expansion of ``i``,
    most significant bit first, so Gray labelling lives in the point order.
    """

    points: np.ndarray
    name: str = "custom"

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=complex).ravel()
        k = pts.size
        if k < 2 or k & (k - 1):
            raise ValueError(f"constellation size must be a power of two >= 2, got {k}")
        if np.unique(pts).size != k:
            raise ValueError("constellation points must be distinct")
        energy = np.mean(np.abs(pts) ** 2)
        if abs(energy - 1.0) > 1e-12:
            raise ValueError(f"average symbol energy must be 1, got {energy!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def bits_per_symbol(self) -> int:
        return self.size.bit_length() - 1

    def labels(self) -> np.ndarray:
        """(K, bits_per_symbol) array of bit labels, MSB first."""
        b = self.bits_per_symbol
        idx = np.arange(self.size)[:, None]
        return ((idx >> np.arange(b - 1, -1, -1)) & 1).astype(np.uint8)

    def indices_of(self, symbols) -> np.ndarray:
        """Index of each symbol in ``points``; symbols must be exact points."""
        symbols = np.asarray(symbols, dtype=complex)
        dist = np.abs(symbols[..., None] - self.points)
        idx = dist.argmin(axis=-1)
        if np.any(np.take_along_axis(dist, idx[..., None], -1) > 1e-9):
            raise ValueError("symbols are not constellation points")
        return idx

    def __repr__(self) -> str:
        return f"Constellation({self.name}, K={self.size})"


def bpsk() -> Constellation:
    return Constellation(np.array([1.0, -1.0]), "bpsk")


def qpsk() -> Constellation:
    """Gray QPSK: first bit picks the in-phase sign, second the quadrature sign."""
    s = 1 / math.sqrt(2)
    return Constellation(np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) * s, "qpsk")


def _check_power_of_two(k: int) -> None:
    if k < 2 or k & (k - 1):
        raise ValueError(f"constellation size must be a power of two >= 2, got {k}")


def psk(k: int, offset: float = 0.0) -> Constellation:
    _check_power_of_two(k)
    pos = np.arange(k)
    pts = np.empty(k, dtype=complex)
    pts[_gray(pos)] = np.exp(1j * (2 * math.pi * pos / k + offset))
    return Constellation(pts, f"{k}psk")


def qam(k: int) -> Constellation:
    """Square Gray-labelled QAM; ``k`` must be an even power of two."""
    _check_power_of_two(k)
    side = math.isqrt(k)
    if side * side != k:
        raise ValueError(f"square QAM needs K = 4**m, got {k}")
    half = side.bit_length() - 1
    levels = 2 * np.arange(side) - (side - 1)
    axis = np.empty(side)
    axis[_gray(np.arange(side))] = levels
    idx = np.arange(k)
    pts = axis[idx >> half] + 1j * axis[idx & (side - 1)]
    return Constellation(pts / math.sqrt(np.mean(np.abs(pts) ** 2)), f"{k}qam")


def get_constellation(name: str) -> Constellation:
    """Look up a constellation by id: bpsk, qpsk, <K>psk or <K>qam."""
    key = name.strip().lower()
    if key == "bpsk":
        return bpsk()
    if key == "qpsk":
        return qpsk()
    for suffix, factory in (("psk", psk), ("qam", qam)):
        if key.endswith(suffix) and key[: -len(suffix)].isdigit():
            return factory(int(key[: -len(suffix)]))
    raise ValueError(f"unknown constellation {name!r}")


class DftOperator:
    """Unitary transform W with W[n, l] = exp(j 2 pi n l / N) / sqrt(N).

    ``forward`` applies W and ``inverse`` applies its conjugate transpose,
    both along the last axis via the FFT.
    """

    def __init__(self, size: int) -> None:
        if size < 1:
            raise ValueError(f"size must be positive, got {size}")
        self.size = size
        self._scale = math.sqrt(size)

    @property
    def matrix(self) -> np.ndarray:
        k = np.arange(self.size)
        return np.exp(2j * math.pi * np.outer(k, k) / self.size) / self._scale

    def forward(self, v) -> np.ndarray:
        return np.fft.ifft(v, axis=-1) * self._scale

    def inverse(self, v) -> np.ndarray:
        return np.fft.fft(v, axis=-1) / self._scale


def map_bits(bits, constellation: Constellation, n: int) -> np.ndarray:
    """Map ``n * bits_per_symbol`` bits (per row, if 2-D) to ``n`` symbols."""
    bits = np.asarray(bits)
    b = constellation.bits_per_symbol
    if bits.shape[-1] != n * b:
        raise ValueError(f"expected {n * b} bits per vector, got {bits.shape[-1]}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    grouped = bits.reshape(*bits.shape[:-1], n, b).astype(np.int64)
    idx = grouped @ (1 << np.arange(b - 1, -1, -1))
    return constellation.points[idx]


def _indices_to_bits(idx: np.ndarray, constellation: Constellation) -> np.ndarray:
    lab = constellation.labels()[idx]
    return lab.reshape(*idx.shape[:-1], idx.shape[-1] * constellation.bits_per_symbol)


def demap_bits(symbols, constellation: Constellation) -> np.ndarray:
    """Inverse of :func:`map_bits` for exact constellation points."""
    return _indices_to_bits(constellation.indices_of(symbols), constellation)


def _check_length(v: np.ndarray, n: int, what: str) -> None:
    if v.shape[-1] != n:
        raise ValueError(f"{what} has length {v.shape[-1]}, expected {n}")


def modulate(s, gamma) -> np.ndarray:
    """Transmit vector x = conj(Gamma) W s.

    Each symbol is spread over every antenna; no cyclic prefix is added.
    """
    s = np.asarray(s, dtype=complex)
    gamma = np.asarray(gamma, dtype=complex)
    _check_length(s, gamma.size, "symbol vector")
    return np.conj(gamma) * DftOperator(gamma.size).forward(s)


def receive_transform(y, delta) -> np.ndarray:
    """y_tilde = W^H conj(Delta) y."""
    y = np.asarray(y, dtype=complex)
    delta = np.asarray(delta, dtype=complex)
    _check_length(y, delta.size, "receive vector")
    return DftOperator(delta.size).inverse(np.conj(delta) * y)


def fast_ml_detect(
    y_tilde, eigenvalues, constellation: Constellation, return_indices: bool = False
) -> np.ndarray:
    """Per-subchannel nearest-point decisions on the diagonalised channel.

    Ties go to the lowest constellation index.
    """
    y_tilde = np.asarray(y_tilde, dtype=complex)
    lam = np.asarray(eigenvalues, dtype=complex)
    _check_length(y_tilde, lam.size, "transformed vector")
    metric = np.abs(y_tilde[..., None] - lam[:, None] * constellation.points) ** 2
    idx = metric.argmin(axis=-1)
    return idx if return_indices else constellation.points[idx]


def _hypotheses(k: int, n: int, flat: np.ndarray) -> np.ndarray:
    """Base-k digits of each flat hypothesis number, MSB first; shape (len(flat), n).

    Numbering hypotheses this way enumerates Omega^N in lexicographic order.
    """
    return (np.asarray(flat, dtype=np.int64)[:, None] // k ** np.arange(n - 1, -1, -1)) % k


def traditional_ml_detect(
    y,
    h,
    constellation: Constellation,
    return_indices: bool = False,
    cap: int = DEFAULT_HYPOTHESIS_CAP,
    chunk: int = 4096,
) -> np.ndarray:
    """Exhaustive joint ML, argmin over Omega^N of ||y - H s||^2.

    Ties go to the lexicographically smallest index tuple.
    """
    h = np.asarray(getattr(h, "entries", h), dtype=complex)
    m, n = h.shape
    if m != n:
        raise ValueError(f"traditional detector expects a square channel, got {h.shape}")
    y = np.asarray(y, dtype=complex)
    _check_length(y, m, "receive vector")
    count = constellation.size**n
    if count > cap:
        raise DetectorCapError(
            f"{constellation.size}**{n} = {count} hypotheses exceeds the cap of {cap}"
        )
    single = y.ndim == 1
    yb = y.reshape(-1, m)
    best = np.full(yb.shape[0], np.inf)
    arg = np.zeros(yb.shape[0], dtype=np.int64)
    for start in range(0, count, chunk):
        block = _hypotheses(constellation.size, n, np.arange(start, min(start + chunk, count)))
        images = constellation.points[block] @ h.T  # (chunk, M)
        metric = (np.abs(yb[:, None, :] - images[None, :, :]) ** 2).sum(axis=-1)
        j = metric.argmin(axis=1)
        val = metric[np.arange(yb.shape[0]), j]
        better = val < best  # strict: earlier chunk wins ties
        best[better] = val[better]
        arg[better] = start + j[better]
    idx = _hypotheses(constellation.size, n, arg)
    if single:
        idx = idx[0]
    else:
        idx = idx.reshape(*y.shape[:-1], n)
    return idx if return_indices else constellation.points[idx]

