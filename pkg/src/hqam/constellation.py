"""
Hierarchical QAM gain profiles and the constellations they generate.

A profile holds two lists of positive sub-channel gains: ``i_gains``
(B_1 ... B_k) and ``q_gains`` (A_1 ... A_m). Each branch output is the
sum of ``d_j * gain_j`` with ``d_j = +/-1``. Index 1 is the weakest
sub-channel on both branches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstraintViolation, InvalidStretch, NonPositiveGain, TooLarge
from .graycode import gray_decode_int

MAX_BITS = 24

__all__ = [
    "MAX_BITS",
    "GainProfile",
    "ConstellationPoint",
    "validate_profile",
    "uniform_profile",
    "stretch",
    "enumerate_points",
    "average_symbol_energy",
    "papr",
    "margins",
    "branch_levels",
    "decision_boundaries",
]


def _check_branch(name: str, gains: Sequence[float]) -> None:
    total = 0.0
    for idx, g in enumerate(gains, start=1):
        if not np.isfinite(g) or g <= 0:
            raise NonPositiveGain(f"{name} gain at index {idx} must be positive and finite, got {g!r}")
        if idx > 1 and not g > total:
            raise ConstraintViolation(name, idx, g, total)
        total += g


@dataclass(frozen=True)
class GainProfile:
    """
    Immutable pair of branch gain vectors.

    Construction validates the layered-gain condition: on each branch,
    every gain strictly exceeds the sum of all weaker gains. Use
    :meth:`unchecked` to build a deliberately invalid profile for
    negative-control experiments.
    """

    i_gains: tuple[float, ...]
    q_gains: tuple[float, ...]

    def __post_init__(self):
        i = tuple(float(g) for g in self.i_gains)
        q = tuple(float(g) for g in self.q_gains)
        object.__setattr__(self, "i_gains", i)
        object.__setattr__(self, "q_gains", q)
        if not q:
            raise ValueError("q_gains must be non-empty (m >= 1)")
        if len(i) + len(q) > MAX_BITS:
            raise TooLarge(f"n = {len(i) + len(q)} exceeds the cap of {MAX_BITS} bits")
        _check_branch("q", q)
        _check_branch("i", i)

    @classmethod
    def unchecked(cls, i_gains: Iterable[float], q_gains: Iterable[float]) -> "GainProfile":
        """Build a profile without enforcing any invariant (test hook)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "i_gains", tuple(float(g) for g in i_gains))
        object.__setattr__(obj, "q_gains", tuple(float(g) for g in q_gains))
        return obj

    @property
    def k(self) -> int:
        return len(self.i_gains)

    @property
    def m(self) -> int:
        return len(self.q_gains)

    @property
    def n(self) -> int:
        return self.k + self.m

    @property
    def max_gain(self) -> float:
        return max(self.i_gains + self.q_gains)

    def to_dict(self) -> dict:
        return {"i_gains": list(self.i_gains), "q_gains": list(self.q_gains)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "GainProfile":
        return validate_profile(obj.get("i_gains", []), obj.get("q_gains", []))

    @classmethod
    def from_json(cls, text: str) -> "GainProfile":
        return cls.from_dict(json.loads(text))

    def __str__(self):
        return f"{2 ** self.n}-QAM(i={list(self.i_gains)}, q={list(self.q_gains)})"


@dataclass(frozen=True)
class ConstellationPoint:
    codeword: str
    i: float
    q: float


def validate_profile(i_gains: Sequence[float], q_gains: Sequence[float]) -> GainProfile:
    """
    Validate two gain lists and return a :class:`GainProfile`.

    Raises
    ------
    NonPositiveGain
        A gain is zero, negative or not finite.
    ConstraintViolation
        A gain does not exceed the sum of the weaker gains on its branch.
        The exception carries ``branch`` ("i" or "q") and the 1-based
        ``index`` of the first offending gain.
    TooLarge
        ``k + m`` exceeds :data:`MAX_BITS`.
    """
    if len(i_gains) + len(q_gains) == 0:
        raise ValueError("a profile needs at least one gain")
    if len(q_gains) == 0:
        raise ValueError("q_gains must be non-empty (m >= 1)")
    return GainProfile(tuple(i_gains), tuple(q_gains))


def uniform_profile(k: int, m: int, base: float = 1.0) -> GainProfile:
    """Equally spaced grid: ``gain_j = base * 2**(j-1)`` on both branches."""
    if k < 0 or m < 1:
        raise ValueError(f"need k >= 0 and m >= 1, got k={k}, m={m}")
    return validate_profile([base * 2.0**j for j in range(k)], [base * 2.0**j for j in range(m)])


def stretch(profile: GainProfile, r: float) -> GainProfile:
    """Scale every I-branch gain by ``r >= 1``; the Q branch is untouched."""
    if not r >= 1:
        raise InvalidStretch(f"stretch factor must be >= 1, got {r!r}")
    return validate_profile([g * r for g in profile.i_gains], profile.q_gains)


def margins(gains: Sequence[float]) -> list[float | None]:
    """Per-index slack ``gain_p - sum(gain_j, j < p)``; ``None`` for p = 1."""
    out: list[float | None] = []
    total = 0.0
    for idx, g in enumerate(gains):
        out.append(None if idx == 0 else g - total)
        total += g
    return out


def branch_levels(gains: Sequence[float]) -> np.ndarray:
    """
    Branch amplitude for every zig-zag word.

    Element ``z`` of the result is ``sum_j (2*z_j - 1) * gains[j]`` where
    ``z_j`` is bit ``j`` of the integer ``z``. An empty branch yields the
    single level ``0``.
    """
    K = len(gains)
    z = np.arange(2**K, dtype=np.int64)
    out = np.zeros(2**K)
    for j, g in enumerate(gains):
        out += np.where((z >> j) & 1, g, -g)
    return out


def decision_boundaries(gains: Sequence[float]) -> np.ndarray:
    """Midpoints between adjacent sorted branch levels (empty if K = 0)."""
    lv = np.sort(branch_levels(gains))
    return 0.5 * (lv[1:] + lv[:-1])


@lru_cache(maxsize=32)
def _point_arrays(profile: GainProfile) -> tuple[np.ndarray, np.ndarray]:
    codes = np.arange(2**profile.n, dtype=np.int64)
    zi = gray_decode_int(codes >> profile.m, max(profile.k, 1))
    zq = gray_decode_int(codes & ((1 << profile.m) - 1), profile.m)
    i = branch_levels(profile.i_gains)[zi]
    q = branch_levels(profile.q_gains)[zq]
    i.setflags(write=False)
    q.setflags(write=False)
    return i, q


def point_arrays(profile: GainProfile, max_bits: int = MAX_BITS) -> tuple[np.ndarray, np.ndarray]:
    """
    I and Q coordinates of all ``2**n`` points, indexed by codeword value.

    The returned arrays are read-only and shared between callers.
    """
    if profile.n > max_bits:
        raise TooLarge(f"2^{profile.n} points exceeds the enumeration cap of 2^{max_bits}")
    return _point_arrays(profile)


def enumerate_points(profile: GainProfile, max_bits: int = MAX_BITS) -> list[ConstellationPoint]:
    i, q = point_arrays(profile, max_bits)
    n = profile.n
    return [ConstellationPoint(format(c, f"0{n}b"), float(i[c]), float(q[c])) for c in range(2**n)]


def average_symbol_energy(profile: GainProfile) -> float:
    # equiprobable independent signs: cross terms vanish
    return float(sum(g * g for g in profile.i_gains) + sum(g * g for g in profile.q_gains))


def papr(profile: GainProfile) -> float:
    """Peak constellation power over average symbol energy."""
    peak = sum(profile.i_gains) ** 2 + sum(profile.q_gains) ** 2
    return peak / average_symbol_energy(profile)
