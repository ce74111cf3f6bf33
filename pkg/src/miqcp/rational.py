"""Arbitrary-precision rational scalars and the bit-size measure.

Every quantity in this package is an exact rational.  ``Rat`` is gmpy2's
``mpq`` when available (much faster) and ``fractions.Fraction`` otherwise;
both keep values canonical (gcd-reduced, positive denominator) at all times.
"""

from __future__ import annotations

import math
from typing import Iterable, Union

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rat

RatLike = Union[int, str, "Rat"]

ZERO = Rat(0)
ONE = Rat(1)


class RationalParseError(ValueError):
    """A token could not be read as an exact rational."""


def rat(value: RatLike) -> Rat:
    """Coerce an int, ``a/b`` string, or rational to a canonical Rat."""
    if isinstance(value, float):
        raise RationalParseError(f"refusing float {value!r}; use 'a/b' strings")
    try:
        return Rat(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise RationalParseError(f"not a rational: {value!r} ({exc})") from exc


def rat_str(x) -> str:
    """Canonical wire form: ``a`` for integers, ``a/b`` otherwise."""
    return str(Rat(x))


def numer(x) -> int:
    return int(x.numerator)


def denom(x) -> int:
    return int(x.denominator)


def is_integral(x) -> bool:
    return x.denominator == 1


def rfloor(x) -> int:
    return numer(x) // denom(x)


def rceil(x) -> int:
    return -((-numer(x)) // denom(x))


def rround(x) -> int:
    """Nearest integer, ties toward +infinity (exact)."""
    return rfloor(Rat(x) + Rat(1, 2))


def isqrt_ceil(n: int) -> int:
    """Smallest k >= 0 with k*k >= n (n >= 0)."""
    if n < 0:
        raise ValueError("isqrt_ceil of a negative number")
    k = math.isqrt(n)
    return k if k * k == n else k + 1


def sqrt_upper_bound(q, frac_bits: int = 32) -> Rat:
    """Rational U with U >= sqrt(q) and U - sqrt(q) <= 2**-frac_bits (q >= 0).

    Computed from the integer square root of the ceiling of q * 4**frac_bits,
    so the bound is exact; no floating point is involved.
    """
    q = Rat(q)
    if q < 0:
        raise ValueError("sqrt_upper_bound of a negative number")
    scale = 1 << frac_bits
    scaled = q * scale * scale
    return Rat(isqrt_ceil(rceil(scaled)), scale)


def size_of(x) -> int:
    """Bit size of one rational: 1 + ceil(log2(|num|+1)) + ceil(log2(den+1)).

    Uses m.bit_length() == ceil(log2(m+1)) for integers m >= 0.
    """
    x = Rat(x)
    return 1 + abs(numer(x)).bit_length() + denom(x).bit_length()


def size_of_seq(xs: Iterable) -> int:
    """Total bit size of a flat iterable of rationals."""
    return sum(size_of(x) for x in xs)
