"""Bitmask helpers: point sets over 0..n-1 are packed into ints."""
from __future__ import annotations

from typing import Iterable, Iterator


def to_mask(points: Iterable[int]) -> int:
    mask = 0
    for p in points:
        mask |= 1 << p
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def next_closure(n: int, closure):
    """Yield every closed mask of a closure system on n points, in lectic order.

    ``closure(mask, forbid)`` returns the closure of ``mask`` or -1 as soon as
    it would add a point of ``forbid``. Ganter's NextClosure.
    """
    current = closure(0, 0)
    if current < 0:
        return
    yield current
    full = (1 << n) - 1
    while current != full:
        for i in range(n - 1, -1, -1):
            if (current >> i) & 1:
                continue
            below = (1 << i) - 1
            low = current & below
            candidate = closure(low | (1 << i), below & ~low)
            if candidate >= 0:
                current = candidate
                yield current
                break
        else:
            return
