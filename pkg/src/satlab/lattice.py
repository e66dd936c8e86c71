"""Bit-parallel primitives on the Boolean lattice P([n]).

A family of subsets of [n] is stored as a Python int with 2**n bits: bit ``m``
is set iff the subset with mask ``m`` is a member (element ``i`` of [n] is bit
``i - 1`` of the mask).  Every lattice operation below is a short sequence of
whole-int shifts and masks, one per coordinate.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

import numpy as np

N_MAX_CORE = 20


def check_n(n: int, cap: int = N_MAX_CORE) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"n must be an int, got {type(n).__name__}")
    n = int(n)
    if n < 1:
        raise ValueError(f"ground set size must be >= 1, got n={n}")
    if n > cap:
        raise ValueError(f"n={n} exceeds the cap of {cap}")
    return n


def full_mask(n: int) -> int:
    """Mask of the whole ground set [n]."""
    return (1 << n) - 1


def all_bits(n: int) -> int:
    """Bitvector of the full power set P([n])."""
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def clear_masks(n: int) -> tuple[int, ...]:
    """``clear_masks(n)[i]`` marks every subset mask whose bit ``i`` is 0."""
    total = all_bits(n)
    out = []
    for i in range(n):
        width = 1 << i
        # one set bit at the start of each period of length 2*width
        starts = total // ((1 << (2 * width)) - 1)
        out.append(starts * ((1 << width) - 1))
    return tuple(out)


@lru_cache(maxsize=4096)
def disjoint_from(n: int, mask: int) -> int:
    """Bitvector of all subsets disjoint from ``mask``."""
    bits = all_bits(n)
    for i, cm in enumerate(clear_masks(n)):
        if mask >> i & 1:
            bits &= cm
    return bits


def cylinder_bits(n: int, index: int, base: int) -> int:
    """All S with ``S & index == base & index``."""
    bits = all_bits(n)
    for i, cm in enumerate(clear_masks(n)):
        if index >> i & 1:
            bits &= (~cm if base >> i & 1 else cm)
    return bits & all_bits(n)


def up_bits(n: int, bits: int) -> int:
    for i, cm in enumerate(clear_masks(n)):
        bits |= (bits & cm) << (1 << i)
    return bits


def down_bits(n: int, bits: int) -> int:
    for i, cm in enumerate(clear_masks(n)):
        bits |= (bits >> (1 << i)) & cm
    return bits


def pwcomp_bits(n: int, bits: int) -> int:
    """Map every member mask ``m`` to ``full ^ m`` (a bit reversal of the vector)."""
    for i, cm in enumerate(clear_masks(n)):
        w = 1 << i
        bits = ((bits & cm) << w) | ((bits >> w) & cm)
    return bits


def strict_up_bits(n: int, bits: int) -> int:
    """Sets that properly contain some member."""
    up = up_bits(n, bits)
    out = 0
    for i, cm in enumerate(clear_masks(n)):
        out |= (up & cm) << (1 << i)
    return out


def minimal_bits(n: int, bits: int) -> int:
    """Inclusion-minimal members."""
    return bits & ~strict_up_bits(n, bits)


def iter_masks(bits: int) -> Iterator[int]:
    """Member masks in ascending order."""
    if bits.bit_length() <= 512:
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low
        return
    raw = np.frombuffer(bits.to_bytes((bits.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    yield from np.flatnonzero(np.unpackbits(raw, bitorder="little")).tolist()


def box_up_bits(n: int, a: int, b: int) -> int:
    """Disjoint occurrence of two families, read through their up-closures.

    Returns every set containing ``X | Y`` with ``X`` in up(a), ``Y`` in up(b)
    and ``X & Y == 0``.  Only the minimal members of one side are needed, and
    ``X | Y == X + Y`` for disjoint masks, so each one contributes a single
    masked shift of the other side.
    """
    ua, ub = up_bits(n, a), up_bits(n, b)
    ma, mb = minimal_bits(n, ua), minimal_bits(n, ub)
    if ma.bit_count() > mb.bit_count():
        ma, ub = mb, ua
    out = 0
    for m in iter_masks(ma):
        out |= (ub & disjoint_from(n, m)) << m
    return out


def table_bytes(n: int, bits: int) -> bytes:
    """Membership table: byte ``m`` is 1 iff mask ``m`` is a member."""
    size = 1 << n
    raw = np.frombuffer(bits.to_bytes(max(size // 8, 1), "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].tobytes()


def bits_from_table(table: bytes | np.ndarray) -> int:
    arr = np.frombuffer(table, dtype=np.uint8) if isinstance(table, (bytes, bytearray)) else table
    packed = np.packbits(arr.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def lex_key(n: int, bits: int) -> str:
    """Sort key comparing bitvectors lexicographically from mask 0 upward."""
    return format(bits, f"0{1 << n}b")[::-1]
