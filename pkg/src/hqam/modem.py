"""
Vectored modulator and successive-interference-cancellation detector.

Codewords are ``n = k + m`` Gray-domain bits. The canonical string form
is ``g_{m+k} ... g_{m+1} g_m ... g_1``: I bits first, strongest first,
then Q bits, strongest first. Read as a binary number this string is the
integer codeword value, so the Q part is ``value & (2**m - 1)`` and the
I part is ``value >> m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .constellation import GainProfile, branch_levels
from .errors import LengthMismatch
from .graycode import gray_decode, gray_decode_int, gray_encode, gray_encode_int

__all__ = [
    "CodeWord",
    "IqSample",
    "DetectionTrace",
    "modulate",
    "sic_detect",
    "detect_with_trace",
    "modulate_array",
    "sic_detect_array",
]


@dataclass(frozen=True)
class CodeWord:
    value: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.value < (1 << self.n):
            raise ValueError(f"codeword value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_string(cls, s: str) -> "CodeWord":
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(int(s, 2), len(s))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "CodeWord":
        """Build from ``(g_1, ..., g_n)``, weakest Q bit first."""
        return cls(sum(int(b) << j for j, b in enumerate(bits)), len(bits))

    def bit(self, j: int) -> int:
        """Gray-domain bit ``g_j`` for 1-based ``j``."""
        if not 1 <= j <= self.n:
            raise IndexError(j)
        return (self.value >> (j - 1)) & 1

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> j) & 1 for j in range(self.n))

    def __str__(self):
        return format(self.value, f"0{self.n}b")


@dataclass(frozen=True)
class IqSample:
    i: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.i) and math.isfinite(self.q)):
            raise ValueError(f"non-finite sample ({self.i}, {self.q})")

    def __complex__(self):
        return complex(self.i, self.q)


@dataclass(frozen=True)
class DetectionTrace:
    """
    SAR-ADC view of one detection.

    ``i`` and ``q`` hold ``(threshold, decision)`` pairs, strongest
    sub-channel first. The first threshold of each branch is 0.
    """

    i: tuple[tuple[float, int], ...]
    q: tuple[tuple[float, int], ...]

    @property
    def comparisons(self) -> tuple[int, int]:
        return len(self.i), len(self.q)

    @property
    def updates(self) -> tuple[int, int]:
        return max(len(self.i) - 1, 0), max(len(self.q) - 1, 0)


CodeLike = Union[CodeWord, str, Sequence[int]]
SampleLike = Union[IqSample, complex, Sequence[float]]


def _as_codeword(cw: CodeLike) -> CodeWord:
    if isinstance(cw, CodeWord):
        return cw
    if isinstance(cw, str):
        return CodeWord.from_string(cw)
    return CodeWord.from_bits(cw)


def _as_sample(y: SampleLike) -> IqSample:
    if isinstance(y, IqSample):
        return y
    if isinstance(y, complex):
        return IqSample(y.real, y.imag)
    i, q = y
    return IqSample(float(i), float(q))


def _branch_amplitude(g_bits: list[int], gains: Sequence[float]) -> float:
    if not gains:
        return 0.0
    z = gray_decode(g_bits)
    return sum((2 * zj - 1) * a for zj, a in zip(z, gains))


def modulate(profile: GainProfile, cw: CodeLike) -> IqSample:
    """Map a Gray-domain codeword to its baseband ``(I, Q)`` amplitude."""
    cw = _as_codeword(cw)
    if cw.n != profile.n:
        raise LengthMismatch(f"codeword has {cw.n} bits, profile needs {profile.n}")
    bits = cw.bits
    m = profile.m
    return IqSample(
        _branch_amplitude(list(bits[m:]), profile.i_gains),
        _branch_amplitude(list(bits[:m]), profile.q_gains),
    )


def _sic_branch(y: float, gains: Sequence[float]) -> list[int]:
    K = len(gains)
    z = [0] * K
    for p in range(K - 1, -1, -1):
        d = 1 if y >= 0 else -1
        z[p] = (1 + d) // 2
        y -= d * gains[p]
    return gray_encode(z) if K else []


def sic_detect(profile: GainProfile, y: SampleLike) -> CodeWord:
    """
    Hard-decision detection by successive interference cancellation.

    Each branch is processed strongest sub-channel first: decide the sign
    of the residual (zero counts as positive), subtract the decided
    contribution, repeat. The zig-zag decisions are then Gray-encoded.
    """
    y = _as_sample(y)
    g_q = _sic_branch(y.q, profile.q_gains)
    g_i = _sic_branch(y.i, profile.i_gains)
    return CodeWord.from_bits(g_q + g_i)


def _sar_branch(y: float, gains: Sequence[float]) -> tuple[list[int], list[tuple[float, int]]]:
    K = len(gains)
    z = [0] * K
    steps = []
    v_th = 0.0
    for p in range(K - 1, -1, -1):
        d = 1 if y >= v_th else -1
        steps.append((v_th, d))
        z[p] = (1 + d) // 2
        if p:
            v_th += d * gains[p]
    return (gray_encode(z) if K else []), steps


def detect_with_trace(profile: GainProfile, y: SampleLike) -> tuple[CodeWord, DetectionTrace]:
    """
    Same decisions as :func:`sic_detect`, computed as a SAR-ADC.

    Instead of cancelling interference from the sample, the comparison
    threshold accumulates the decided contributions and the raw sample
    is compared against it.
    """
    y = _as_sample(y)
    g_q, tq = _sar_branch(y.q, profile.q_gains)
    g_i, ti = _sar_branch(y.i, profile.i_gains)
    return CodeWord.from_bits(g_q + g_i), DetectionTrace(tuple(ti), tuple(tq))


def modulate_array(profile: GainProfile, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`modulate` over integer codeword values."""
    codes = np.asarray(codes, dtype=np.int64)
    m, k = profile.m, profile.k
    zq = gray_decode_int(codes & ((1 << m) - 1), m)
    zi = gray_decode_int(codes >> m, max(k, 1))
    return branch_levels(profile.i_gains)[zi], branch_levels(profile.q_gains)[zq]


def _sic_branch_array(y: np.ndarray, gains: Sequence[float]) -> np.ndarray:
    r = np.array(y, dtype=float, copy=True)
    z = np.zeros(r.shape, dtype=np.int64)
    for p in range(len(gains) - 1, -1, -1):
        pos = r >= 0
        z |= pos.astype(np.int64) << p
        r -= np.where(pos, gains[p], -gains[p])
    return gray_encode_int(z)


def sic_detect_array(profile: GainProfile, yi: np.ndarray, yq: np.ndarray) -> np.ndarray:
    """Vectorized :func:`sic_detect`; returns integer codeword values."""
    gq = _sic_branch_array(yq, profile.q_gains)
    gi = _sic_branch_array(yi, profile.i_gains)
    return (gi << profile.m) | gq
