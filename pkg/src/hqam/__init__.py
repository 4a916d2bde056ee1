"""Hierarchical 2^n-QAM modem with a successive-interference-cancellation detector."""

__version__ = "0.1.0"

from .constellation import (  # noqa: E402
    MAX_BITS,
    ConstellationPoint,
    GainProfile,
    average_symbol_energy,
    enumerate_points,
    papr,
    stretch,
    uniform_profile,
    validate_profile,
)
from .errors import (  # noqa: E402
    ConstraintViolation,
    HqamError,
    InvalidConfig,
    InvalidStretch,
    LengthMismatch,
    NonPositiveGain,
    TargetOutOfRange,
    TooLarge,
)
from .graycode import gray_decode, gray_encode  # noqa: E402
from .modem import CodeWord, DetectionTrace, IqSample, detect_with_trace, modulate, sic_detect  # noqa: E402
from .oracle import BerVector, analytic_bit_ber, ml_detect, qfunc  # noqa: E402
from .channel import NoiseSpec, awgn, sigma_from_ebn0, sigma_from_esn0  # noqa: E402
