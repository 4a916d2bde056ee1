"""
Reference detectors and exact error probabilities.

:func:`ml_detect` is the conventional table-lookup receiver: it searches
all ``2**n`` constellation points for the one nearest to the sample and
knows nothing about the layered structure. :func:`analytic_bit_ber`
integrates the Gaussian density over the nearest-neighbour decision
intervals of each branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import erfc

from .constellation import MAX_BITS, GainProfile, branch_levels, point_arrays
from .graycode import gray_encode_int
from .modem import CodeWord, SampleLike, _as_sample

__all__ = ["qfunc", "BerVector", "ml_detect", "ml_detect_array", "analytic_bit_ber"]

_SQRT2 = np.sqrt(2.0)
_CHUNK_ELEMS = 1 << 22


def qfunc(x):
    """Gaussian tail probability ``P(N(0, 1) > x)``."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / _SQRT2)


def ml_detect_array(
    profile: GainProfile, yi: np.ndarray, yq: np.ndarray, max_bits: int = MAX_BITS,
    return_distance: bool = False,
):
    """
    Minimum Euclidean distance detection over the full point table.

    Ties go to the smallest codeword value because the table is ordered
    by codeword and ``argmin`` returns the first minimum.
    """
    pi, pq = point_arrays(profile, max_bits)
    yi = np.asarray(yi, dtype=float).ravel()
    yq = np.asarray(yq, dtype=float).ravel()
    out = np.empty(yi.shape, dtype=np.int64)
    dist = np.empty(yi.shape) if return_distance else None
    step = max(1, _CHUNK_ELEMS // pi.size)
    for s in range(0, yi.size, step):
        di = yi[s:s + step, None] - pi[None, :]
        dq = yq[s:s + step, None] - pq[None, :]
        d2 = di * di + dq * dq
        idx = np.argmin(d2, axis=1)
        out[s:s + step] = idx
        if return_distance:
            dist[s:s + step] = d2[np.arange(idx.size), idx]
    if return_distance:
        return out, dist
    return out


def ml_detect(profile: GainProfile, y: SampleLike, max_bits: int = MAX_BITS) -> CodeWord:
    y = _as_sample(y)
    code = ml_detect_array(profile, np.array([y.i]), np.array([y.q]), max_bits)[0]
    return CodeWord(int(code), profile.n)


@dataclass(frozen=True)
class BerVector:
    """Per-bit error probabilities; ``p[j - 1]`` belongs to bit ``g_j``."""

    p: tuple[float, ...]

    def __post_init__(self):
        if any(not 0.0 <= v <= 1.0 for v in self.p):
            raise ValueError(f"probabilities outside [0, 1]: {self.p}")

    def __getitem__(self, j: int) -> float:
        """1-based access, matching codeword bit indices."""
        if not 1 <= j <= len(self.p):
            raise IndexError(j)
        return self.p[j - 1]

    def __len__(self):
        return len(self.p)

    @property
    def mean(self) -> float:
        return float(np.mean(self.p))


def _interval_prob(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``P(a < X < b)`` for standard normal ``X``, without cancellation."""
    both_pos = a >= 0
    both_neg = b <= 0
    straddle = ~(both_pos | both_neg)
    out = np.empty(np.broadcast(a, b).shape)
    with np.errstate(invalid="ignore"):
        out[...] = np.where(both_pos, qfunc(a) - qfunc(b), 0.0)
        out[...] = np.where(both_neg, qfunc(-b) - qfunc(-a), out)
        out[...] = np.where(straddle, 1.0 - qfunc(-a) - qfunc(b), out)
    return np.clip(out, 0.0, 1.0)


def _branch_ber(gains: Sequence[float], sigma: float) -> np.ndarray:
    K = len(gains)
    if K == 0:
        return np.zeros(0)
    levels = branch_levels(gains)
    g_words = gray_encode_int(np.arange(2**K, dtype=np.int64))
    order = np.argsort(levels, kind="stable")
    sorted_levels = levels[order]
    # decision region r of the nearest-neighbour detector decides level order[r]
    mid = 0.5 * (sorted_levels[1:] + sorted_levels[:-1])
    lo = np.concatenate(([-np.inf], mid))
    hi = np.concatenate((mid, [np.inf]))
    region_word = g_words[order]
    # rows: transmitted level, columns: decision region
    a = (lo[None, :] - levels[:, None]) / sigma
    b = (hi[None, :] - levels[:, None]) / sigma
    prob = _interval_prob(a, b)
    diff = g_words[:, None] ^ region_word[None, :]
    out = np.empty(K)
    for j in range(K):
        wrong = ((diff >> j) & 1).astype(bool)
        out[j] = prob[wrong].sum() / 2**K
    return out


def analytic_bit_ber(profile: GainProfile, sigma_branch: float) -> BerVector:
    """
    Exact per-bit error probability of the nearest-neighbour detector
    in AWGN with per-branch standard deviation ``sigma_branch``.
    """
    if not sigma_branch > 0:
        raise ValueError(f"sigma_branch must be positive, got {sigma_branch!r}")
    q = _branch_ber(profile.q_gains, sigma_branch)
    i = _branch_ber(profile.i_gains, sigma_branch)
    return BerVector(tuple(float(v) for v in np.concatenate((q, i))))
