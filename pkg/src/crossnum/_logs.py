"""Overflow-safe natural logarithms for arbitrary-precision integers."""

from __future__ import annotations

import math

_LN2 = math.log(2.0)


def log_int(n: int) -> float:
    """ln n for a positive integer of any size.

    Counts that overflow float conversion are shifted down to a 64-bit
    mantissa first; the relative error stays at machine precision.
    """
    if n <= 0:
        raise ValueError(f"need a positive integer, got {n}")
    if n.bit_length() <= 960:
        return math.log(n)
    shift = n.bit_length() - 64
    return math.log(n >> shift) + shift * _LN2
