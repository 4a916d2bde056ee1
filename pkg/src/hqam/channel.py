"""
AWGN channel with reproducible random streams and SNR bookkeeping.

Noise power convention: each branch receives independent zero-mean
Gaussian noise of standard deviation ``sigma_branch``; the total complex
noise power is ``N0 = 2 * sigma_branch**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constellation import GainProfile, average_symbol_energy
from .modem import IqSample, SampleLike, _as_sample

__all__ = [
    "NoiseSpec",
    "parse_seed",
    "make_stream",
    "awgn",
    "awgn_array",
    "sigma_from_esn0",
    "sigma_from_ebn0",
    "sigma_from_db",
    "SNR_METRICS",
    "sigma_for_metric",
]

SNR_METRICS = ("esn0", "ebn0", "sigma")


def parse_seed(value) -> int:
    """Accept a non-negative int, a decimal string or a ``0x`` hex string."""
    if isinstance(value, str):
        value = int(value, 0)
    value = int(value)
    if not 0 <= value < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {value}")
    return value


@dataclass(frozen=True)
class NoiseSpec:
    sigma_branch: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma_branch > 0:
            raise ValueError(f"sigma_branch must be positive, got {self.sigma_branch!r}")
        object.__setattr__(self, "seed", parse_seed(self.seed))

    @property
    def total_power(self) -> float:
        return 2.0 * self.sigma_branch**2

    def stream(self, *key: int) -> np.random.Generator:
        return make_stream(self.seed, *key)


def make_stream(seed: int, *key: int) -> np.random.Generator:
    """
    Independent generator for ``(seed, *key)``.

    The key (e.g. worker or block index) goes into the seed sequence's
    spawn key, so any two distinct keys give statistically independent
    streams and the same key always gives the same stream.
    """
    ss = np.random.SeedSequence(entropy=parse_seed(seed), spawn_key=tuple(int(x) for x in key))
    return np.random.Generator(np.random.PCG64(ss))


def awgn(x: SampleLike, spec: NoiseSpec, stream: np.random.Generator) -> IqSample:
    x = _as_sample(x)
    w_i, w_q = stream.standard_normal(2) * spec.sigma_branch
    return IqSample(x.i + w_i, x.q + w_q)


def awgn_array(xi: np.ndarray, xq: np.ndarray, sigma_branch: float, stream: np.random.Generator):
    w = stream.standard_normal((2, np.size(xi)))
    return xi + sigma_branch * w[0], xq + sigma_branch * w[1]


def sigma_from_esn0(profile: GainProfile, esn0_db: float) -> float:
    return math.sqrt(average_symbol_energy(profile) / (2.0 * 10.0 ** (esn0_db / 10.0)))


def sigma_from_ebn0(profile: GainProfile, ebn0_db: float) -> float:
    es = average_symbol_energy(profile)
    return math.sqrt(es / (2.0 * profile.n * 10.0 ** (ebn0_db / 10.0)))


def sigma_from_db(snr_db: float) -> float:
    """Fixed-sigma axis: ``sigma_branch = 10**(-snr_db / 20)``, independent of the profile."""
    return 10.0 ** (-snr_db / 20.0)


def sigma_for_metric(profile: GainProfile, metric: str, snr_db: float) -> float:
    if metric == "esn0":
        return sigma_from_esn0(profile, snr_db)
    if metric == "ebn0":
        return sigma_from_ebn0(profile, snr_db)
    if metric == "sigma":
        return sigma_from_db(snr_db)
    raise ValueError(f"unknown SNR metric {metric!r}; expected one of {SNR_METRICS}")
