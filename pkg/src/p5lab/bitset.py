"""Small helpers for vertex sets stored as Python int bitmasks."""

from __future__ import annotations

from collections.abc import Iterable
from fractions import Fraction


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def sorted_members(mask: int) -> list[int]:
    return list(iter_bits(mask))


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction or ``"a/b"`` string to an exact Fraction.

    Floats are refused: every threshold in this package is compared exactly.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_str(x: Fraction) -> str:
    """Serialise as reduced ``"num/den"`` (denominator always present)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
