"""
Monte Carlo BER sweeps, detector equivalence scans and SNR-gap search.

Randomness is organised in fixed blocks of :data:`BLOCK` symbols. Block
``b`` of sweep point ``p`` always draws from the stream keyed by
``(seed, p, b)``, so results do not depend on how blocks are spread over
worker processes or in which order they finish.
"""

from __future__ import annotations

import math
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import beta

from .channel import SNR_METRICS, awgn_array, make_stream, parse_seed, sigma_for_metric
from .constellation import MAX_BITS, GainProfile, decision_boundaries, stretch, uniform_profile, validate_profile
from .errors import HqamError, InvalidConfig, TargetOutOfRange
from .modem import CodeWord, modulate_array, sic_detect_array
from .oracle import analytic_bit_ber, ml_detect_array

__all__ = [
    "BLOCK",
    "DETECTORS",
    "BerRecord",
    "SweepConfig",
    "Mismatch",
    "binomial_ci",
    "bit_error_counts",
    "profile_from_config",
    "run_point",
    "run_sweep",
    "equivalence_scan",
    "snr_gap_at_ber",
    "stretch_gain_at_ber",
]

BLOCK = 1 << 16
DETECTORS = ("sic", "ml")


def binomial_ci(errors: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    alpha = 1.0 - level
    lo = 0.0 if errors == 0 else float(beta.ppf(alpha / 2, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(beta.ppf(1 - alpha / 2, errors + 1, trials - errors))
    return lo, hi


@dataclass(frozen=True)
class BerRecord:
    detector: str
    snr_db: float
    sigma: float
    errors: tuple[int, ...]
    trials: int
    analytic: tuple[float, ...] | None = None

    def __post_init__(self):
        if any(e > self.trials for e in self.errors):
            raise ValueError("error count exceeds trials")

    @property
    def ber(self) -> tuple[float, ...]:
        return tuple(e / self.trials for e in self.errors)

    @property
    def ci(self) -> tuple[tuple[float, float], ...]:
        return tuple(binomial_ci(e, self.trials) for e in self.errors)


def bit_error_counts(sent: np.ndarray, decided: np.ndarray, n: int) -> np.ndarray:
    diff = np.bitwise_xor(sent, decided)
    return np.array([np.count_nonzero((diff >> j) & 1) for j in range(n)], dtype=np.int64)


def _detect(name: str, profile: GainProfile, yi, yq, max_bits: int) -> np.ndarray:
    if name == "sic":
        return sic_detect_array(profile, yi, yq)
    if name == "ml":
        return ml_detect_array(profile, yi, yq, max_bits)
    raise InvalidConfig(f"unknown detector {name!r}")


def _simulate_block(profile, sigma, seed, key, size, detectors, max_bits):
    rng = make_stream(seed, *key)
    codes = rng.integers(0, 2**profile.n, size=size, dtype=np.int64)
    xi, xq = modulate_array(profile, codes)
    yi, yq = awgn_array(xi, xq, sigma, rng)
    return {d: bit_error_counts(codes, _detect(d, profile, yi, yq, max_bits), profile.n) for d in detectors}


def _check_detectors(detectors: Sequence[str]) -> tuple[str, ...]:
    detectors = tuple(detectors)
    if not detectors:
        raise InvalidConfig("at least one detector is required")
    for d in detectors:
        if d not in DETECTORS:
            raise InvalidConfig(f"unknown detector {d!r}; expected a subset of {DETECTORS}")
    return detectors


def run_point(
    profile: GainProfile,
    sigma_branch: float,
    n_symbols: int,
    seed: int,
    detectors: Sequence[str] = DETECTORS,
    *,
    snr_db: float = math.nan,
    key: tuple[int, ...] = (),
    min_errors: int | None = None,
    workers: int = 1,
    executor: Executor | None = None,
    max_bits: int = MAX_BITS,
) -> dict[str, BerRecord]:
    """
    Simulate one SNR point.

    Every detector sees the same transmitted codewords and the same noisy
    samples, so their per-bit error counts are directly comparable.
    With ``min_errors`` set the point stops after the first block at
    which every bit of every detector has accrued that many errors.
    """
    detectors = _check_detectors(detectors)
    if n_symbols < 1:
        raise InvalidConfig("n_symbols must be >= 1")
    if not sigma_branch > 0:
        raise ValueError(f"sigma_branch must be positive, got {sigma_branch!r}")
    seed = parse_seed(seed)
    n_blocks = -(-n_symbols // BLOCK)
    sizes = [BLOCK] * (n_blocks - 1) + [n_symbols - BLOCK * (n_blocks - 1)]

    own_pool = None
    if executor is None and workers > 1:
        executor = own_pool = ProcessPoolExecutor(max_workers=workers)
    wave = max(workers, 1) if executor is not None else 1

    totals = {d: np.zeros(profile.n, dtype=np.int64) for d in detectors}
    trials = 0
    try:
        done = False
        for start in range(0, n_blocks, wave):
            args = [
                (profile, sigma_branch, seed, key + (b,), sizes[b], detectors, max_bits)
                for b in range(start, min(start + wave, n_blocks))
            ]
            if executor is None:
                results = [_simulate_block(*a) for a in args]
            else:
                results = [f.result() for f in [executor.submit(_simulate_block, *a) for a in args]]
            for a, res in zip(args, results):
                for d in detectors:
                    totals[d] += res[d]
                trials += a[4]
                if min_errors is not None and all((totals[d] >= min_errors).all() for d in detectors):
                    done = True
                    break
            if done:
                break
    finally:
        if own_pool is not None:
            own_pool.shutdown()

    analytic = analytic_bit_ber(profile, sigma_branch).p
    return {
        d: BerRecord(d, snr_db, sigma_branch, tuple(int(x) for x in totals[d]), trials, analytic)
        for d in detectors
    }


def profile_from_config(cfg: dict) -> GainProfile:
    """
    Profile from either ``{"profile": {"i_gains": ..., "q_gains": ...}}``
    or ``{"k": .., "m": .., "base": .., "stretch_r": ..}``.
    """
    if "profile" in cfg:
        p = cfg["profile"]
        if not isinstance(p, dict):
            raise InvalidConfig("'profile' must be an object with i_gains and q_gains")
        profile = validate_profile(p.get("i_gains", []), p.get("q_gains", []))
    elif "m" in cfg:
        profile = uniform_profile(int(cfg.get("k", 0)), int(cfg["m"]), float(cfg.get("base", 1.0)))
    else:
        raise InvalidConfig("config needs 'profile' or 'k'/'m'")
    r = cfg.get("stretch_r")
    if r is not None:
        profile = stretch(profile, float(r))
    return profile


@dataclass(frozen=True)
class SweepConfig:
    profile: GainProfile
    snr_points: tuple[float, ...]
    snr_metric: str = "esn0"
    symbols_per_point: int = 100_000
    seed: int = 0
    detectors: tuple[str, ...] = DETECTORS
    min_errors: int | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "snr_points", tuple(float(s) for s in self.snr_points))
        object.__setattr__(self, "detectors", tuple(self.detectors))
        object.__setattr__(self, "seed", parse_seed(self.seed))
        if not self.snr_points:
            raise InvalidConfig("snr points must be non-empty")
        if self.snr_metric not in SNR_METRICS:
            raise InvalidConfig(f"unknown snr metric {self.snr_metric!r}; expected one of {SNR_METRICS}")
        if self.symbols_per_point < 1:
            raise InvalidConfig("symbols_per_point must be >= 1")
        if self.workers < 1:
            raise InvalidConfig("workers must be >= 1")
        _check_detectors(self.detectors)

    @classmethod
    def from_dict(cls, cfg: dict) -> "SweepConfig":
        snr = cfg.get("snr") or {}
        try:
            return cls(
                profile=profile_from_config(cfg),
                snr_points=tuple(snr.get("points_db", ())),
                snr_metric=snr.get("metric", "esn0"),
                symbols_per_point=int(cfg.get("symbols_per_point", 100_000)),
                seed=cfg.get("seed", 0),
                detectors=tuple(cfg.get("detectors", DETECTORS)),
                min_errors=cfg.get("min_errors"),
                workers=int(cfg.get("workers", 1)),
            )
        except HqamError:
            raise
        except (TypeError, ValueError) as exc:
            raise InvalidConfig(str(exc)) from exc

    def to_dict(self) -> dict:
        return {
            "profile": self.profile.to_dict(),
            "snr": {"metric": self.snr_metric, "points_db": list(self.snr_points)},
            "symbols_per_point": self.symbols_per_point,
            "seed": self.seed,
            "detectors": list(self.detectors),
            "min_errors": self.min_errors,
            "workers": self.workers,
        }


def run_sweep(config: SweepConfig) -> list[BerRecord]:
    """One record per (SNR point, detector), in that nesting order."""
    pool = ProcessPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    records = []
    try:
        for p, snr in enumerate(config.snr_points):
            sigma = sigma_for_metric(config.profile, config.snr_metric, snr)
            res = run_point(
                config.profile, sigma, config.symbols_per_point, config.seed, config.detectors,
                snr_db=snr, key=(p,), min_errors=config.min_errors,
                workers=config.workers, executor=pool,
            )
            records.extend(res[d] for d in config.detectors)
    finally:
        if pool is not None:
            pool.shutdown()
    return records


@dataclass(frozen=True)
class Mismatch:
    i: float
    q: float
    sic: str
    ml: str
    sic_distance: float
    ml_distance: float


def _near_boundary(y: np.ndarray, gains: Sequence[float], eps: float) -> np.ndarray:
    bnd = decision_boundaries(gains)
    if bnd.size == 0:
        return np.zeros(y.shape, dtype=bool)
    pos = np.searchsorted(bnd, y)
    left = np.abs(y - bnd[np.clip(pos - 1, 0, bnd.size - 1)])
    right = np.abs(y - bnd[np.clip(pos, 0, bnd.size - 1)])
    return np.minimum(left, right) <= eps


def equivalence_scan(
    profile: GainProfile,
    mode: str = "grid",
    count: int = 401,
    seed: int = 0,
    *,
    eps: float | None = None,
    max_bits: int = MAX_BITS,
    chunk: int = 1 << 17,
) -> tuple[list[Mismatch], int]:
    """
    Compare SIC and ML decisions over a dense grid or random samples.

    The scan box spans ``[-1.5 * peak, 1.5 * peak]`` on each axis where
    ``peak`` is the branch's largest amplitude. Samples within ``eps`` of
    a branch decision boundary are skipped; those are ties with no
    preferred answer. Grid mode uses ``count`` points per axis, random
    mode ``count`` uniform samples.

    Returns the list of disagreements and the number of samples compared.
    """
    if eps is None:
        eps = 1e-9 * profile.max_gain
    peak_q = sum(profile.q_gains)
    peak_i = sum(profile.i_gains) or peak_q
    if mode == "grid":
        gi = np.linspace(-1.5 * peak_i, 1.5 * peak_i, count)
        gq = np.linspace(-1.5 * peak_q, 1.5 * peak_q, count)
        total = count * count

        def batch(s, e):
            idx = np.arange(s, e)
            return gi[idx // count], gq[idx % count]
    elif mode == "random":
        rng = make_stream(seed, 0xE9)
        total = count

        def batch(s, e):
            u = rng.uniform(-1.5, 1.5, size=(2, e - s))
            return u[0] * peak_i, u[1] * peak_q
    else:
        raise InvalidConfig(f"unknown scan mode {mode!r}")

    mismatches: list[Mismatch] = []
    compared = 0
    n = profile.n
    for s in range(0, total, chunk):
        yi, yq = batch(s, min(s + chunk, total))
        keep = ~(_near_boundary(yi, profile.i_gains, eps) | _near_boundary(yq, profile.q_gains, eps))
        yi, yq = yi[keep], yq[keep]
        compared += yi.size
        sic = sic_detect_array(profile, yi, yq)
        ml, ml_d = ml_detect_array(profile, yi, yq, max_bits, return_distance=True)
        bad = np.nonzero(sic != ml)[0]
        if bad.size:
            xi, xq = modulate_array(profile, sic[bad])
            sic_d = (yi[bad] - xi) ** 2 + (yq[bad] - xq) ** 2
            for t, b in enumerate(bad):
                mismatches.append(Mismatch(
                    float(yi[b]), float(yq[b]),
                    str(CodeWord(int(sic[b]), n)), str(CodeWord(int(ml[b]), n)),
                    float(sic_d[t]), float(ml_d[b]),
                ))
    return mismatches, compared


def _snr_at_ber(profile, bit_index, target, metric, lo=-40.0, hi=120.0, iters=200):
    def f(snr):
        return analytic_bit_ber(profile, sigma_for_metric(profile, metric, snr))[bit_index] - target

    if not (f(lo) > 0 > f(hi)):
        raise TargetOutOfRange(f"BER {target!r} for bit {bit_index} is not bracketed by [{lo}, {hi}] dB")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return 0.5 * (lo + hi)


def snr_gap_at_ber(
    reference: GainProfile, improved: GainProfile, target_ber: float, bit_index: int, snr_metric: str = "ebn0",
) -> float:
    """SNR the reference needs minus SNR the improved profile needs, at ``target_ber`` for one bit."""
    if not 0 < target_ber < 0.5:
        raise TargetOutOfRange(f"target BER must lie in (0, 0.5), got {target_ber!r}")
    if not 1 <= bit_index <= min(reference.n, improved.n):
        raise ValueError(f"bit index {bit_index} out of range")
    return _snr_at_ber(reference, bit_index, target_ber, snr_metric) - _snr_at_ber(
        improved, bit_index, target_ber, snr_metric
    )


def stretch_gain_at_ber(
    profile_unstretched: GainProfile, r: float, target_ber: float, bit_index: int, snr_metric: str = "ebn0",
) -> float:
    """Horizontal dB gain of ``stretch(profile, r)`` over ``profile`` for one bit."""
    return snr_gap_at_ber(profile_unstretched, stretch(profile_unstretched, r), target_ber, bit_index, snr_metric)
