import math

import numpy as np
import pytest

from hqam.channel import (
    NoiseSpec,
    awgn,
    awgn_array,
    make_stream,
    parse_seed,
    sigma_for_metric,
    sigma_from_db,
    sigma_from_ebn0,
    sigma_from_esn0,
)
from hqam.modem import IqSample


def test_noiseless_limit():
    spec = NoiseSpec(1e-300, seed=3)
    y = awgn(IqSample(1.5, -2.0), spec, spec.stream())
    assert y.i == pytest.approx(1.5, abs=1e-200) and y.q == pytest.approx(-2.0, abs=1e-200)


def test_deterministic():
    spec = NoiseSpec(0.7, seed=123)
    a = [awgn((0, 0), spec, s) for s in [spec.stream(1)] for _ in range(5)]
    s2 = spec.stream(1)
    b = [awgn((0, 0), spec, s2) for _ in range(5)]
    assert a == b


def test_streams_differ_by_key():
    a = make_stream(7, 0).standard_normal(4)
    b = make_stream(7, 1).standard_normal(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, make_stream(7, 0).standard_normal(4))


def test_moments():
    N = 10**6
    sigma = 0.8
    yi, yq = awgn_array(np.zeros(N), np.zeros(N), sigma, make_stream(99))
    for w in (yi, yq):
        assert abs(w.mean()) <= 5 * sigma / math.sqrt(N)
        assert w.var() == pytest.approx(sigma**2, rel=0.02)
    assert abs(np.corrcoef(yi, yq)[0, 1]) < 0.01


def test_total_power():
    assert NoiseSpec(0.5).total_power == 0.5


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_bad_sigma(bad):
    with pytest.raises(ValueError):
        NoiseSpec(bad)


@pytest.mark.parametrize("text, value", [("42", 42), ("0x2a", 42), (17, 17), ("0xFFFFFFFFFFFFFFFF", 2**64 - 1)])
def test_parse_seed(text, value):
    assert parse_seed(text) == value


def test_parse_seed_range():
    with pytest.raises(ValueError):
        parse_seed(2**64)
    with pytest.raises(ValueError):
        parse_seed(-1)


def test_esn0(qam16, bpsk):
    assert sigma_from_esn0(qam16, 10.0) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert sigma_from_esn0(bpsk, 0.0) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert sigma_from_esn0(qam16, 11.0) < sigma_from_esn0(qam16, 10.0)


def test_ebn0(qam16, bpsk, qam128_stretched):
    assert sigma_from_ebn0(qam16, 10.0) == pytest.approx(math.sqrt(1 / 8), rel=1e-15)
    assert sigma_from_ebn0(bpsk, 3.0) == sigma_from_esn0(bpsk, 3.0)
    assert sigma_from_ebn0(qam128_stretched, 14.0) == pytest.approx(
        math.sqrt(169 / (2 * 7 * 10**1.4)), rel=1e-15
    )


def test_metric_dispatch(qam16):
    assert sigma_for_metric(qam16, "sigma", 20.0) == sigma_from_db(20.0) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        sigma_for_metric(qam16, "snr", 1.0)
