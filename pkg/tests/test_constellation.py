import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hqam.constellation import (
    GainProfile,
    average_symbol_energy,
    branch_levels,
    enumerate_points,
    margins,
    papr,
    stretch,
    uniform_profile,
    validate_profile,
)
from hqam.errors import ConstraintViolation, InvalidStretch, NonPositiveGain, TooLarge
from hqam.modem import modulate


def brute_points(i_gains, q_gains):
    """Every sign pattern of the weighted sum, without any Gray mapping."""
    def levels(gains):
        return sorted({sum(d * g for d, g in zip(ds, gains)) for ds in itertools.product((-1, 1), repeat=len(gains))})
    return {(i, q) for i in (levels(i_gains) or [0.0]) for q in levels(q_gains)}


class TestValidate:
    def test_16qam(self):
        p = validate_profile([1, 2], [1, 2])
        assert p.k == 2 and p.m == 2 and p.n == 4

    def test_equal_gains_rejected_at_index_2(self):
        with pytest.raises(ConstraintViolation) as exc:
            validate_profile([1], [1, 1])
        assert exc.value.branch == "q"
        assert exc.value.index == 2

    def test_i_branch_violation(self):
        with pytest.raises(ConstraintViolation) as exc:
            validate_profile([1, 2, 2.5], [1])
        assert (exc.value.branch, exc.value.index) == ("i", 3)

    def test_128qam(self):
        p = validate_profile([1, 2, 4], [1, 2, 4, 8])
        assert p.n == 7

    @pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
    def test_non_positive(self, bad):
        with pytest.raises(NonPositiveGain):
            validate_profile([bad], [1.0])

    def test_needs_q_branch(self):
        with pytest.raises(ValueError):
            validate_profile([1.0], [])
        with pytest.raises(ValueError):
            validate_profile([], [])

    def test_cap(self):
        with pytest.raises(TooLarge):
            uniform_profile(13, 12)

    def test_direct_construction_validates(self):
        with pytest.raises(ConstraintViolation):
            GainProfile((), (2.0, 1.0))

    def test_unchecked_bypasses(self):
        p = GainProfile.unchecked([], [1.0, 1.0])
        assert p.q_gains == (1.0, 1.0)

    def test_margins(self):
        assert margins([1, 2, 4, 8]) == [None, 1, 1, 1]
        assert margins([2, 4, 8]) == [None, 2, 2]


@pytest.mark.parametrize(
    "k, m, i_gains, q_gains",
    [(2, 2, [1, 2], [1, 2]), (3, 4, [1, 2, 4], [1, 2, 4, 8]), (0, 1, [], [1])],
)
def test_uniform_profile(k, m, i_gains, q_gains):
    p = uniform_profile(k, m, 1)
    assert list(p.i_gains) == i_gains
    assert list(p.q_gains) == q_gains


@pytest.mark.parametrize("k", range(0, 13))
@pytest.mark.parametrize("m", range(1, 13))
def test_uniform_always_valid(k, m):
    if k + m > 24:
        pytest.skip("above cap")
    for base in (1e-3, 1.0, 7.5):
        p = uniform_profile(k, m, base)
        ms = margins(p.q_gains)[1:] + margins(p.i_gains)[1:]
        assert all(v == pytest.approx(base) for v in ms)


class TestStretch:
    def test_identity(self, qam16):
        assert stretch(qam16, 1.0) == qam16

    def test_128(self):
        p = stretch(uniform_profile(3, 4), 2)
        assert p.i_gains == (2.0, 4.0, 8.0)
        assert p.q_gains == (1.0, 2.0, 4.0, 8.0)

    def test_8qam(self):
        assert stretch(validate_profile([1], [1, 2]), 2).i_gains == (2.0,)

    def test_rejects_shrink(self, qam16):
        with pytest.raises(InvalidStretch):
            stretch(qam16, 0.5)

    @given(st.floats(1.0, 10.0))
    @settings(max_examples=30, deadline=None)
    def test_scales_i_only(self, r):
        base = uniform_profile(2, 3)
        a = enumerate_points(base)
        b = enumerate_points(stretch(base, r))
        for pa, pb in zip(a, b):
            assert pa.codeword == pb.codeword
            assert pb.i == pa.i * r
            assert pb.q == pa.q


class TestEnumerate:
    def test_16qam_grid(self, qam16):
        pts = enumerate_points(qam16)
        assert len(pts) == 16
        assert {(p.i, p.q) for p in pts} == {(i, q) for i in (-3, -1, 1, 3) for q in (-3, -1, 1, 3)}

    def test_bpsk(self, bpsk):
        assert {(p.i, p.q) for p in enumerate_points(bpsk)} == {(0.0, -1.0), (0.0, 1.0)}

    def test_8qam_stretched(self):
        pts = enumerate_points(validate_profile([2], [1, 2]))
        assert {(p.i, p.q) for p in pts} == {(i, q) for i in (-2, 2) for q in (-3, -1, 1, 3)}

    def test_matches_brute_force(self, profile):
        pts = enumerate_points(profile)
        got = {(p.i, p.q) for p in pts}
        assert len(pts) == 2**profile.n == len(got)
        want = brute_points(profile.i_gains, profile.q_gains)
        assert np.allclose(sorted(got), sorted(want), rtol=0, atol=1e-12)

    def test_symmetric(self, profile):
        got = {(p.i, p.q) for p in enumerate_points(profile)}
        assert all((-i + 0.0, -q + 0.0) in got for i, q in got)

    def test_points_equal_modulate(self, profile):
        for p in enumerate_points(profile):
            y = modulate(profile, p.codeword)
            assert (y.i, y.q) == (p.i, p.q)

    @pytest.mark.parametrize("k, m", [(2, 2), (1, 2), (3, 3), (0, 3)])
    def test_min_distance_uniform(self, k, m):
        p = uniform_profile(k, m)
        xy = np.array([(pt.i, pt.q) for pt in enumerate_points(p)])
        d = np.sqrt(((xy[:, None, :] - xy[None, :, :]) ** 2).sum(-1))
        d[np.diag_indices_from(d)] = np.inf
        assert d.min() == pytest.approx(2.0)

    def test_cap(self, qam16):
        with pytest.raises(TooLarge):
            enumerate_points(qam16, max_bits=3)

    def test_branch_levels_empty(self):
        assert list(branch_levels([])) == [0.0]


class TestEnergy:
    @pytest.mark.parametrize(
        "i, q, es",
        [([1, 2], [1, 2], 10.0), ([], [1], 1.0), ([2, 4, 8], [1, 2, 4, 8], 169.0), ([1, 2, 4], [1, 2, 4, 8], 106.0)],
    )
    def test_values(self, i, q, es):
        assert average_symbol_energy(validate_profile(i, q)) == es

    def test_equals_enumeration_mean(self, profile):
        pts = enumerate_points(profile)
        mean = np.mean([p.i**2 + p.q**2 for p in pts])
        assert average_symbol_energy(profile) == pytest.approx(mean, rel=1e-12)


class TestPapr:
    def test_8qam(self):
        assert papr(validate_profile([1], [1, 2])) == pytest.approx(10 / 6, rel=1e-12)
        assert papr(validate_profile([2], [1, 2])) == pytest.approx(13 / 9, rel=1e-12)

    def test_bpsk(self, bpsk):
        assert papr(bpsk) == 1.0

    def test_16qam(self, qam16):
        assert papr(qam16) == pytest.approx(1.8)

    def test_peak_from_enumeration(self, profile):
        pts = enumerate_points(profile)
        peak = max(p.i**2 + p.q**2 for p in pts)
        assert papr(profile) == pytest.approx(peak / average_symbol_energy(profile), rel=1e-12)
        assert papr(profile) >= 1.0

    @pytest.mark.parametrize("m", range(2, 7))
    def test_stretch_to_square_extent_reduces_papr(self, m):
        # 2^(2m-1): k = m - 1, stretch until max I extent equals max Q extent
        base = uniform_profile(m - 1, m)
        r = Fraction(2**m - 1, 2 ** (m - 1) - 1)
        assert papr(stretch(base, float(r))) <= papr(base)


def test_json_round_trip(profile):
    text = profile.to_json()
    assert json.loads(text) == {"i_gains": list(profile.i_gains), "q_gains": list(profile.q_gains)}
    assert GainProfile.from_json(text) == profile
