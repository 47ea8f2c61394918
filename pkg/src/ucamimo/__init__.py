"""Link-level simulation of parallel, non-coaxial UCA line-of-sight MIMO.

Channel-independent beamforming turns the tilted-array channel into a
circulant one that the DFT diagonalises, so maximum-likelihood detection
splits into N scalar decisions.
"""

from .channel import (
    ChannelMatrix,
    CirculantChannel,
    CompensationPair,
    approximation_variance,
    circulant_channel,
    circulant_residual,
    compensation_pair,
    eigenvalue_spread,
    exact_channel,
    model_channel,
)
from .geometry import (
    ConfigError,
    LinkConfig,
    Position3,
    antenna_positions,
    exact_distance,
    neighbor_spacing,
    reference_distance,
    taylor_distance,
)
from .modem import (
    Constellation,
    DetectorCapError,
    DftOperator,
    bpsk,
    demap_bits,
    fast_ml_detect,
    get_constellation,
    map_bits,
    modulate,
    qpsk,
    receive_transform,
    traditional_ml_detect,
)
from .presets import PRESETS, spacing_base, tilted_link
from .simulate import (
    BerPoint,
    ComplexityReport,
    NoiseModel,
    SpacingPoint,
    SweepConfig,
    awgn,
    complexity_counts,
    complexity_ratios,
    run_ber_sweep,
    spacing_search,
    substream,
    theoretical_ber_bpsk,
)

__version__ = "0.1.0"
