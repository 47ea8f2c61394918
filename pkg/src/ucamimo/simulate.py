"""Monte Carlo BER engine, closed-form BPSK BER, operation counts and spacing search."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Optional, Sequence

import numpy as np
from scipy.special import erfc

from .channel import (
    circulant_channel,
    compensation_pair,
    eigenvalue_spread,
    exact_channel,
    model_channel,
)
from .geometry import LinkConfig, neighbor_spacing
from .modem import (
    DEFAULT_HYPOTHESIS_CAP,
    Constellation,
    DetectorCapError,
    _indices_to_bits,
    fast_ml_detect,
    get_constellation,
    map_bits,
    modulate,
    receive_transform,
    traditional_ml_detect,
)

__all__ = [
    "NoiseModel",
    "SweepConfig",
    "BerPoint",
    "ComplexityReport",
    "SpacingPoint",
    "PreparedLink",
    "prepare_link",
    "substream",
    "awgn",
    "run_ber_sweep",
    "theoretical_ber_bpsk",
    "complexity_counts",
    "complexity_ratios",
    "spacing_search",
    "BLOCK_TRIALS",
    "WORKERS_ENV",
]

# Trials per random substream.  Changing it changes every simulated number.
BLOCK_TRIALS = 2048
WORKERS_ENV = "UCAMIMO_WORKERS"
SCHEMES = ("proposed", "traditional")
CHANNELS = ("exact", "model")
_U64 = 1 << 64


@dataclass(frozen=True)
class NoiseModel:
    """Complex AWGN with total variance ``omega_sq`` per receive antenna."""

    omega_sq: float

    def __post_init__(self) -> None:
        if not self.omega_sq > 0 or not math.isfinite(self.omega_sq):
            raise ValueError(f"omega_sq must be finite and positive, got {self.omega_sq!r}")

    @classmethod
    def from_snr_db(cls, snr_db: float, symbol_energy: float = 1.0) -> "NoiseModel":
        return cls(symbol_energy / 10.0 ** (snr_db / 10.0))


def substream(seed: int, stream: int, index: int) -> np.random.Generator:
    """Counter-based generator for substream ``(stream, index)`` of ``seed``.

    Philox is keyed by ``seed`` and ``stream`` and started at a counter whose
    upper half is ``index``, so any substream can be produced independently of
    every other one.
    """
    if not 0 <= seed < _U64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if stream < 0 or index < 0:
        raise ValueError("stream and index must be non-negative")
    bitgen = np.random.Philox(key=seed + (stream << 64), counter=index << 128)
    return np.random.Generator(bitgen)


def awgn(shape, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples, variance omega_sq/2 per part."""
    sd = math.sqrt(noise.omega_sq / 2.0)
    out = rng.standard_normal((*np.atleast_1d(shape), 2))
    out *= sd
    return out.view(np.complex128)[..., 0]


@dataclass(frozen=True)
class SweepConfig:
    """One BER sweep.

    ``channel`` selects what the signal actually passes through: ``"exact"``
    is the free-space channel of every antenna pair, ``"model"`` is the
    compensated circulant model the beamformers were designed for.  With
    ``normalize`` the channel is scaled so the mean subchannel power gain
    ``mean |lambda_k|^2`` is 1; otherwise SNR is E_s / omega^2 with the path
    loss left inside the link.
    """

    link: LinkConfig
    snr_db_points: Sequence[float]
    trials_per_point: int
    seed: int = 0
    scheme: str = "proposed"
    constellation: str = "bpsk"
    channel: str = "exact"
    normalize: bool = False
    hypothesis_cap: int = DEFAULT_HYPOTHESIS_CAP

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_db_points", tuple(float(s) for s in self.snr_db_points))
        if not self.snr_db_points:
            raise ValueError("snr_db_points must be non-empty")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        if not 0 <= self.seed < _U64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        get_constellation(self.constellation)
        if self.link.n_tx != self.link.n_rx:
            raise ValueError("BER sweeps need n_tx == n_rx")


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    scheme: str
    trials: int
    bits: int
    bit_errors: int
    theory_ber: Optional[float] = None

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits


@dataclass(frozen=True, eq=False)
class PreparedLink:
    """Everything a sweep needs about the link, after optional normalisation."""

    h: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    eigenvalues: np.ndarray
    scale: float


def prepare_link(link: LinkConfig, channel: str = "exact", normalize: bool = False) -> PreparedLink:
    circ = circulant_channel(link)
    pair = compensation_pair(link)
    if channel == "exact":
        h = exact_channel(link).entries
    elif channel == "model":
        h = model_channel(circ, pair)
    else:
        raise ValueError(f"channel must be one of {CHANNELS}, got {channel!r}")
    scale = 1.0
    if normalize:
        scale = 1.0 / math.sqrt(np.mean(np.abs(circ.eigenvalues) ** 2))
    return PreparedLink(h * scale, pair.gamma, pair.delta, circ.eigenvalues * scale, scale)


def _run_block(
    cfg: SweepConfig,
    link: PreparedLink,
    const: Constellation,
    noise: NoiseModel,
    point: int,
    block: int,
    trials: int,
) -> int:
    n = cfg.link.n_tx
    rng = substream(cfg.seed, point, block)
    bits = rng.integers(0, 2, size=(trials, n * const.bits_per_symbol), dtype=np.uint8)
    z = awgn((trials, n), noise, rng)
    s = map_bits(bits, const, n)
    if cfg.scheme == "proposed":
        y = modulate(s, link.gamma) @ link.h.T + z
        idx = fast_ml_detect(receive_transform(y, link.delta), link.eigenvalues, const, True)
    else:
        y = s @ link.h.T + z
        idx = traditional_ml_detect(y, link.h, const, True, cap=cfg.hypothesis_cap)
    return int(np.count_nonzero(_indices_to_bits(idx, const) != bits))


def _default_workers() -> int:
    value = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {value!r}") from None


def run_ber_sweep(cfg: SweepConfig, workers: Optional[int] = None) -> list[BerPoint]:
    """Simulate bit errors at every SNR point.

    Trials are split into fixed blocks of :data:`BLOCK_TRIALS`, each drawing
    from its own substream, so the result does not depend on ``workers``.
    Both schemes draw identical bits and noise for the same seed.
    """
    const = get_constellation(cfg.constellation)
    n = cfg.link.n_tx
    if cfg.scheme == "traditional" and const.size**n > cfg.hypothesis_cap:
        raise DetectorCapError(
            f"{const.size}**{n} hypotheses exceeds the cap of {cfg.hypothesis_cap}"
        )
    link = prepare_link(cfg.link, cfg.channel, cfg.normalize)
    workers = _default_workers() if workers is None else max(1, int(workers))
    blocks = [
        (b, min(BLOCK_TRIALS, cfg.trials_per_point - b * BLOCK_TRIALS))
        for b in range(-(-cfg.trials_per_point // BLOCK_TRIALS))
    ]
    is_bpsk = const.size == 2
    points = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for p, snr in enumerate(cfg.snr_db_points):
            noise = NoiseModel.from_snr_db(snr)
            task = partial(_run_block, cfg, link, const, noise, p)
            errors = pool.map(task, *zip(*blocks))
            theory = None
            if is_bpsk and cfg.scheme == "proposed":
                theory = theoretical_ber_bpsk(link.eigenvalues, noise)
            points.append(
                BerPoint(
                    snr_db=snr,
                    scheme=cfg.scheme,
                    trials=cfg.trials_per_point,
                    bits=cfg.trials_per_point * n * const.bits_per_symbol,
                    bit_errors=sum(errors),
                    theory_ber=theory,
                )
            )
    return points


def theoretical_ber_bpsk(
    eigenvalues,
    noise: NoiseModel,
    symbol_energy: float = 1.0,
    form: str = "coherent",
    constellation: Optional[Constellation] = None,
) -> float:
    """Average BPSK bit error probability over the diagonal subchannels.

    ``form="coherent"`` uses erfc(sqrt(|lambda|^2 E_s / omega^2)), the exact
    error rate of antipodal signalling in complex AWGN of total variance
    omega^2.  ``form="printed"`` uses erfc(|lambda|^2 E_s / (N omega^2))
    and is kept only for comparison; it does not track simulation.
    """
    if constellation is not None and not (
        constellation.size == 2 and np.isclose(constellation.points.sum(), 0)
    ):
        raise ValueError("theoretical BER is defined for BPSK only")
    gains = np.abs(np.asarray(eigenvalues, dtype=complex)) ** 2 * symbol_energy
    n = gains.size
    if form == "coherent":
        arg = np.sqrt(gains / noise.omega_sq)
    elif form == "printed":
        arg = gains / (n * noise.omega_sq)
    else:
        raise ValueError(f"unknown form {form!r}")
    return float(np.mean(0.5 * erfc(arg)))


@dataclass(frozen=True)
class ComplexityReport:
    scheme: str
    n: int
    k: int
    complex_additions: int
    complex_multiplications: int


def complexity_counts(n: int, k: int, scheme: str) -> ComplexityReport:
    """Complex additions and multiplications to detect one symbol vector.

    The fast count assumes a radix-2 transform, so ``n`` must be a power of two.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if scheme in ("fast", "proposed"):
        if n & (n - 1):
            raise ValueError(f"fast-scheme counts need n to be a power of two, got {n}")
        log2n = n.bit_length() - 1
        adds = n * log2n + n * k
        mults = (n * log2n) // 2 + n * (k + 1)
        scheme = "fast"
    elif scheme == "traditional":
        adds = n * n * k**n
        mults = (n * n + n) * k**n
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return ComplexityReport(scheme, n, k, adds, mults)


def complexity_ratios(n: int, k: int) -> tuple[Fraction, Fraction]:
    """Exact traditional/fast ratios of additions and of multiplications."""
    fast = complexity_counts(n, k, "fast")
    trad = complexity_counts(n, k, "traditional")
    return (
        Fraction(trad.complex_additions, fast.complex_additions),
        Fraction(trad.complex_multiplications, fast.complex_multiplications),
    )


@dataclass(frozen=True)
class SpacingPoint:
    radius: float
    best_count: int
    spacing: float
    sigma_sq: float
    satisfied: bool = field(default=True)


def spacing_search(
    radius_range: Sequence[float],
    threshold: float,
    base: LinkConfig,
    n_max: int = 256,
) -> list[SpacingPoint]:
    """Largest antenna count per radius whose eigenvalue spread stays below ``threshold``.

    ``base`` supplies the distance, wavelength and amplitude; it must be
    coaxial.  Both arrays take the radius under test and the same count.
    When no count in 2..n_max qualifies, the point reports N = 2 with
    ``satisfied=False``.
    """
    radii = [float(r) for r in radius_range]
    if not radii:
        raise ValueError("radius_range must be non-empty")
    if base.phi != 0.0:
        raise ValueError("spacing search needs a coaxial base configuration (phi = 0)")
    out = []
    for radius in radii:
        best, best_sigma = None, None
        for count in range(2, n_max + 1):
            cfg = base.with_(r_tx=radius, r_rx=radius, n_tx=count, n_rx=count)
            sigma = eigenvalue_spread(circulant_channel(cfg).eigenvalues)
            if sigma < threshold:
                best, best_sigma = count, sigma
        if best is None:
            cfg = base.with_(r_tx=radius, r_rx=radius, n_tx=2, n_rx=2)
            sigma = eigenvalue_spread(circulant_channel(cfg).eigenvalues)
            out.append(SpacingPoint(radius, 2, neighbor_spacing(radius, 2), sigma, False))
        else:
            out.append(SpacingPoint(radius, best, neighbor_spacing(radius, best), best_sigma))
    return out
