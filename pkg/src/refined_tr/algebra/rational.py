"""Exact rationals.

All coefficients in the engine are :class:`gmpy2.mpq` values.  They compare
and hash equal to :class:`fractions.Fraction` and ``int``, so callers may pass
either.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

Rational = type(gmpy2.mpq(0))

ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


def Q(value, den=None) -> Rational:
    """Coerce ``value`` (int, Fraction, mpq or ``"p/q"`` string) to mpq."""
    if den is not None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return gmpy2.mpq(value, den)
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, int):
        return gmpy2.mpq(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def parse_rational(text: str) -> Rational:
    """Parse ``"p"`` or ``"p/q"``; floats are rejected on purpose."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return gmpy2.mpq(p, q)


def rational_str(value) -> str:
    """Canonical ``"p/q"`` (or ``"p"``) string."""
    value = Q(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def binomial(n, k: int) -> Rational:
    """Generalized binomial coefficient ``C(n, k)`` for rational ``n``."""
    if k < 0:
        return ZERO
    out = ONE
    n = Q(n)
    for i in range(k):
        out = out * (n - i) / (i + 1)
    return out
