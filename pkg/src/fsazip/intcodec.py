"""Elias-delta codes and gap coding of sorted integer lists."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence

from fsazip.bitio import BitStream


def elias_delta_length(x: int) -> int:
    """Codeword length in bits for ``x >= 1``."""
    if x < 1:
        raise ValueError("Elias-delta codes positive integers only")
    nbits = x.bit_length()  # floor(log2 x) + 1
    return (nbits - 1) + 2 * (nbits.bit_length() - 1) + 1


def elias_delta_encode(x: int, s: BitStream) -> BitStream:
    if x < 1:
        raise ValueError("Elias-delta codes positive integers only; got %r" % x)
    nbits = x.bit_length()
    lbits = nbits.bit_length()
    # gamma(nbits): lbits-1 zeros then nbits in lbits bits
    s.write_bits(nbits, 2 * lbits - 1)
    s.write_bits(x & ((1 << (nbits - 1)) - 1), nbits - 1)
    return s


def elias_delta_decode(s: BitStream) -> int:
    zeros = s.count_zeros()
    if zeros > 64:
        raise ValueError("corrupt Elias-delta codeword (length prefix too long)")
    nbits = (1 << zeros) | s.read_bits(zeros)
    return (1 << (nbits - 1)) | s.read_bits(nbits - 1)


def encode_nonneg(x: int, s: BitStream) -> BitStream:
    """Code ``x >= 0`` as the Elias-delta codeword of ``x + 1``."""
    if x < 0:
        raise ValueError("negative value %r" % x)
    return elias_delta_encode(x + 1, s)


def decode_nonneg(s: BitStream) -> int:
    return elias_delta_decode(s) - 1


def difference_encode(xs: Sequence[int], s: BitStream) -> BitStream:
    """Code a nondecreasing list of nonnegative integers by its gaps."""
    prev = 0
    for x in xs:
        if x < prev:
            raise ValueError("difference_encode requires a sorted nonnegative list")
        encode_nonneg(x - prev, s)
        prev = x
    return s


def difference_decode(s: BitStream, count: int) -> list[int]:
    out = []
    acc = 0
    for _ in range(count):
        acc += decode_nonneg(s)
        out.append(acc)
    return out


def difference_decode_until(s: BitStream, stop: Callable[[int], bool]) -> list[int]:
    """Decode gaps until ``stop(value)`` returns True after a value is read.

    Used where the element count is implied by the decoded values themselves.
    """
    out = []
    acc = 0
    while True:
        acc += decode_nonneg(s)
        out.append(acc)
        if stop(acc):
            return out


def difference_bits(xs: Iterable[int]) -> int:
    """Exact bit count :func:`difference_encode` would emit, without writing."""
    total = 0
    prev = 0
    for x in xs:
        total += elias_delta_length(x - prev + 1)
        prev = x
    return total


def theta(x: float) -> float:
    """Concave real-valued upper bound on the length of ``encode_nonneg(x)``."""
    lg = math.log2(x + 1)
    return lg + 2 * math.log2(lg + 1) + 1


def lemma1_bound(d: int, n: int) -> float:
    """Worst-case bits for gap-coding ``d`` sorted values in ``[0, n]``.

    Equals ``d * theta(n / d)``.
    """
    if d == 0:
        return 0.0
    r = math.log2((n + d) / d)
    return d * r + 2 * d * math.log2(r + 1) + d
