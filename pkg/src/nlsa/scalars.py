"""Exact rational scalars.

Scalars are plain ``int`` whenever the denominator is 1 and ``fractions.Fraction``
otherwise; both mix freely in arithmetic.  Nothing in this package ever touches a
float.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

Scalar = int | Fraction


def normalize(x: Scalar) -> Scalar:
    """Collapse denominator-1 fractions back to int."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return x
    return x


def parse_scalar(text: str) -> Scalar:
    """Parse "p" or "p/q" into an exact scalar (reduced, q > 0)."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        d = int(den)
        if d == 0:
            raise ValueError(f"zero denominator in scalar {text!r}")
        return normalize(Fraction(int(num), d))
    return int(s)


def format_scalar(x: Scalar) -> str:
    """Canonical string form: "p" or "p/q" with q > 1, reduced."""
    return str(Fraction(x))


class RationalField:
    """The rationals as an explicit field object.

    Mostly a namespace for zero/one/sqrt; ordinary arithmetic goes through the
    Python operators on int/Fraction.  ``sqrt`` succeeds only on perfect squares:
    the algebraically-closed-field hypotheses of the theory surface as explicit
    ``None`` results instead of approximations.
    """

    zero: Scalar = 0
    one: Scalar = 1

    @staticmethod
    def add(a: Scalar, b: Scalar) -> Scalar:
        return normalize(a + b)

    @staticmethod
    def sub(a: Scalar, b: Scalar) -> Scalar:
        return normalize(a - b)

    @staticmethod
    def mul(a: Scalar, b: Scalar) -> Scalar:
        return normalize(a * b)

    @staticmethod
    def div(a: Scalar, b: Scalar) -> Scalar:
        if b == 0:
            raise ZeroDivisionError("division by zero scalar")
        return normalize(Fraction(a) / Fraction(b))

    @staticmethod
    def sqrt(x: Scalar) -> Scalar | None:
        """Exact square root, or None if x is not a square in QQ."""
        f = Fraction(x)
        if f < 0:
            return None
        rn = _isqrt_exact(f.numerator)
        if rn is None:
            return None
        rd = _isqrt_exact(f.denominator)
        if rd is None:
            return None
        return normalize(Fraction(rn, rd))


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


QQ = RationalField()
