import itertools

import numpy as np
import pytest

from hqam.graycode import gray_decode, gray_decode_int, gray_encode, gray_encode_int


@pytest.mark.parametrize(
    "z, g",
    [
        ([0, 0, 0, 0], [0, 0, 0, 0]),
        ([1, 1, 0, 1], [0, 1, 1, 1]),
        ([1], [1]),
        ([0, 1], [1, 1]),
    ],
)
def test_encode_examples(z, g):
    assert gray_encode(z) == g
    assert gray_decode(g) == z


def test_decode_examples():
    assert gray_decode([0, 0, 0]) == [0, 0, 0]
    assert gray_decode([1, 1]) == [0, 1]


@pytest.mark.parametrize("K", range(1, 13))
def test_bijection_exhaustive(K):
    words = np.arange(2**K, dtype=np.int64)
    g = gray_encode_int(words)
    assert np.array_equal(np.sort(g), words)
    assert np.array_equal(gray_decode_int(g, K), words)
    assert np.array_equal(gray_encode_int(gray_decode_int(words, K)), words)


@pytest.mark.parametrize("K", range(1, 9))
def test_list_and_int_forms_agree(K):
    for bits in itertools.product((0, 1), repeat=K):
        z = list(bits)
        value = sum(b << j for j, b in enumerate(z))
        g = gray_encode(z)
        assert sum(b << j for j, b in enumerate(g)) == gray_encode_int(value)
        assert gray_decode(g) == z


@pytest.mark.parametrize("K", range(2, 9))
def test_bit_flip_propagation(K):
    # g_j changes iff exactly one of z_j, z_{j+1} changes
    for a in range(2**K):
        for b in range(2**K):
            dz = a ^ b
            dg = gray_encode_int(a) ^ gray_encode_int(b)
            for j in range(K - 1):
                assert ((dg >> j) & 1) == (((dz >> j) & 1) ^ ((dz >> (j + 1)) & 1))
            assert (dg >> (K - 1)) & 1 == (dz >> (K - 1)) & 1


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        gray_encode([])
    with pytest.raises(ValueError):
        gray_encode([0, 2])
    with pytest.raises(ValueError):
        gray_decode([0] * 25)
