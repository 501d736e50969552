"""Exact scalars: rationals, the extended naturals, JSON encodings."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

ExtNat = Union[int, float]  # finite values are ints; the only float is INF
Rational = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"not a finite rational: {x!r}")
        # decimal reading, so 1e-9 becomes 1/10**9 rather than its binary expansion
        return Fraction(repr(x))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def as_extnat(x) -> ExtNat:
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity"):
            return INF
        x = int(x)
    if isinstance(x, float):
        if x == INF:
            return INF
        if not x.is_integer():
            raise ValueError(f"not an extended natural: {x!r}")
        x = int(x)
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"not an extended natural: {x!r}")
        x = int(x)
    if not isinstance(x, int) or isinstance(x, bool):
        raise TypeError(f"not an extended natural: {x!r}")
    if x < 0:
        raise ValueError(f"extended naturals are nonnegative, got {x}")
    return x


def is_inf(x) -> bool:
    return x == INF


def fmt_rational(q: Fraction) -> str:
    """Canonical ``"p/q"`` string; integers are written ``"n/1"``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fmt_extnat(x: ExtNat):
    return "inf" if x == INF else int(x)


def fmt_extreal(x):
    """A nonnegative exact value or ``INF``, as ``"inf"`` or ``"p/q"``."""
    return "inf" if x == INF else fmt_rational(x)


def parse_extreal(x):
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity"):
        return INF
    if isinstance(x, float) and x == INF:
        return INF
    return as_fraction(x)


def mul_extreal(c: Fraction, x):
    """``c * x`` with the measure-theory convention ``0 * INF = 0``."""
    if x == INF:
        return Fraction(0) if c == 0 else INF
    return c * x
