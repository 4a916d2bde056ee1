"""
Per-branch Gray mapping between zig-zag bits ``z`` and data bits ``g``.

Bit vectors are ordinary sequences where element ``0`` is sub-channel 1
(the weakest gain) and element ``K - 1`` is the strongest sub-channel.
The integer helpers use the same convention with bit ``j - 1`` holding
sub-channel ``j``, so they work unchanged on numpy integer arrays.
"""

from typing import Sequence

MAX_WORD = 24


def _check(bits: Sequence[int]) -> None:
    if not 1 <= len(bits) <= MAX_WORD:
        raise ValueError(f"bit vector length must be in [1, {MAX_WORD}], got {len(bits)}")
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b!r}")


def gray_encode(z: Sequence[int]) -> list[int]:
    """Receiver-side encoder: ``g_K = z_K`` and ``g_j = z_j XOR z_{j+1}``."""
    _check(z)
    K = len(z)
    return [z[j] ^ z[j + 1] for j in range(K - 1)] + [z[K - 1]]


def gray_decode(g: Sequence[int]) -> list[int]:
    """Transmitter-side inverse of :func:`gray_encode`."""
    _check(g)
    K = len(g)
    z = [0] * K
    z[K - 1] = g[K - 1]
    for j in range(K - 2, -1, -1):
        z[j] = g[j] ^ z[j + 1]
    return z


def gray_encode_int(z):
    """Integer form of :func:`gray_encode`; accepts ints or integer arrays."""
    return z ^ (z >> 1)


def gray_decode_int(g, width: int):
    """Integer form of :func:`gray_decode` for words of ``width`` bits."""
    z = g
    shift = 1
    while shift < width:
        z = z ^ (z >> shift)
        shift <<= 1
    return z
