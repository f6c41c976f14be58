"""Exact binary fixed-point scalars.

A :class:`Dyadic` is ``mantissa * 2**exponent`` with an arbitrary-size integer
mantissa.  Values are kept canonical (odd mantissa, or zero with exponent 0),
so equality and hashing are structural and the text literal is unique.

Text literal: ``[-]0x<hex-mantissa>p<exponent>``, e.g. ``0x3p-2 == 0.75``.
Complex literal: ``<dyadic>[+|-]<dyadic>i``, e.g. ``0x1p1+0x0p0i == 2``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

__all__ = [
    "Dyadic",
    "DyadicComplex",
    "round_shift",
    "ceil_log2_int",
    "round_scalar",
]


def round_shift(m: int, k: int) -> int:
    """Return ``m / 2**k`` rounded to nearest, ties to even.  ``k <= 0`` is an exact shift."""
    if k <= 0:
        return m << -k
    q = m >> k
    r = m - (q << k)
    half = 1 << (k - 1)
    if r > half or (r == half and q & 1):
        q += 1
    return q


def ceil_log2_int(n: int) -> int:
    """Smallest ``k`` with ``n <= 2**k`` for a positive integer ``n``."""
    if n <= 0:
        raise ValueError("ceil_log2_int needs a positive integer")
    return (n - 1).bit_length()


@total_ordering
class Dyadic:
    """Exact dyadic rational ``mantissa * 2**exponent``."""

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        mantissa = int(mantissa)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", int(exponent))

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # -- construction -----------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "Dyadic":
        if isinstance(x, Dyadic):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, float):
            if not math.isfinite(x):
                raise ValueError("non-finite float")
            num, den = x.as_integer_ratio()
            return cls(num, -(den.bit_length() - 1))
        if isinstance(x, Rational):
            den = x.denominator
            if den & (den - 1):
                raise ValueError(f"{x} is not a dyadic rational")
            return cls(x.numerator, -(den.bit_length() - 1))
        if isinstance(x, str):
            return cls.from_literal(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Dyadic")

    @classmethod
    def from_fraction(cls, x: Fraction, bits: int) -> "Dyadic":
        """Nearest multiple of ``2**-bits`` to an arbitrary rational (ties to even)."""
        x = Fraction(x)
        num = x.numerator << bits
        q, r = divmod(num, x.denominator)
        twice = 2 * r
        if twice > x.denominator or (twice == x.denominator and q & 1):
            q += 1
        return cls(q, -bits)

    _LITERAL = re.compile(r"^\s*(-?)0x([0-9a-fA-F]+)p([+-]?\d+)\s*$")

    @classmethod
    def from_literal(cls, text: str) -> "Dyadic":
        m = cls._LITERAL.match(text)
        if not m:
            raise ValueError(f"malformed dyadic literal: {text!r}")
        mant = int(m.group(2), 16)
        if m.group(1):
            mant = -mant
        return cls(mant, int(m.group(3)))

    # -- conversion -------------------------------------------------------
    def to_literal(self) -> str:
        sign = "-" if self.mantissa < 0 else ""
        return f"{sign}0x{abs(self.mantissa):x}p{self.exponent}"

    __str__ = to_literal

    def __repr__(self):
        return f"Dyadic({self.to_literal()})"

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self):
        return math.ldexp(float(self.mantissa), self.exponent) if self.mantissa.bit_length() < 1000 \
            else float(self.to_fraction())

    def __bool__(self):
        return self.mantissa != 0

    def __hash__(self):
        return hash((self.mantissa, self.exponent))

    # -- arithmetic (all exact) ------------------------------------------
    def _align(self, other: "Dyadic"):
        e = min(self.exponent, other.exponent)
        return self.mantissa << (self.exponent - e), other.mantissa << (other.exponent - e), e

    def __add__(self, other):
        try:
            other = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        return Dyadic.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __abs__(self):
        return Dyadic(abs(self.mantissa), self.exponent)

    def scale(self, k: int) -> "Dyadic":
        """Exact multiplication by ``2**k``."""
        return Dyadic(self.mantissa, self.exponent + k)

    def __lshift__(self, k: int):
        return self.scale(k)

    def __rshift__(self, k: int):
        return self.scale(-k)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        try:
            return self == Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        try:
            other = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, _ = self._align(other)
        return a < b

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def round(self, bits: int) -> "Dyadic":
        """Nearest multiple of ``2**-bits``, ties to even mantissa."""
        k = -bits - self.exponent
        if k <= 0:
            return self
        return Dyadic(round_shift(self.mantissa, k), -bits)

    def floor(self) -> int:
        if self.exponent >= 0:
            return self.mantissa << self.exponent
        return self.mantissa >> -self.exponent

    def ceil_log2(self) -> int:
        """Smallest ``k`` with ``self <= 2**k`` (``self`` must be positive)."""
        if self.mantissa <= 0:
            raise ValueError("ceil_log2 of a non-positive dyadic")
        return ceil_log2_int(self.mantissa) + self.exponent

    def fractional_bits(self) -> int:
        return max(0, -self.exponent)


class DyadicComplex:
    """Exact complex dyadic ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Dyadic.coerce(re))
        object.__setattr__(self, "im", Dyadic.coerce(im))

    def __setattr__(self, name, value):
        raise AttributeError("DyadicComplex is immutable")

    @classmethod
    def coerce(cls, z) -> "DyadicComplex":
        if isinstance(z, DyadicComplex):
            return z
        if isinstance(z, complex):
            return cls(z.real, z.imag)
        if isinstance(z, tuple) and len(z) == 2:
            return cls(*z)
        if isinstance(z, str):
            return cls.from_literal(z)
        return cls(z, 0)

    _LITERAL = re.compile(
        r"^\s*(-?0x[0-9a-fA-F]+p[+-]?\d+)([+-])(0x[0-9a-fA-F]+p[+-]?\d+)i\s*$"
    )

    @classmethod
    def from_literal(cls, text: str) -> "DyadicComplex":
        m = cls._LITERAL.match(text)
        if not m:
            # a bare real literal is accepted as well
            try:
                return cls(Dyadic.from_literal(text), 0)
            except ValueError:
                raise ValueError(f"malformed complex dyadic literal: {text!r}") from None
        im = Dyadic.from_literal(m.group(3))
        if m.group(2) == "-":
            im = -im
        return cls(Dyadic.from_literal(m.group(1)), im)

    def to_literal(self) -> str:
        im = self.im
        sign = "-" if im.mantissa < 0 else "+"
        return f"{self.re.to_literal()}{sign}{abs(im).to_literal()}i"

    __str__ = to_literal

    def __repr__(self):
        return f"DyadicComplex({self.to_literal()})"

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            other = DyadicComplex.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = DyadicComplex.coerce(other)
        return DyadicComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = DyadicComplex.coerce(other)
        return DyadicComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return DyadicComplex.coerce(other) - self

    def __mul__(self, other):
        other = DyadicComplex.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return DyadicComplex(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return DyadicComplex(-self.re, -self.im)

    def conjugate(self) -> "DyadicComplex":
        return DyadicComplex(self.re, -self.im)

    def scale(self, k: int) -> "DyadicComplex":
        return DyadicComplex(self.re.scale(k), self.im.scale(k))

    def abs_bound(self) -> Dyadic:
        """``|re| + |im|``: an upper bound on the modulus, at most sqrt(2) too large."""
        return abs(self.re) + abs(self.im)

    def abs_squared(self) -> Dyadic:
        return self.re * self.re + self.im * self.im

    def round(self, bits: int) -> "DyadicComplex":
        return DyadicComplex(self.re.round(bits), self.im.round(bits))

    def is_real(self) -> bool:
        return not self.im


def round_scalar(x, bits: int) -> DyadicComplex:
    """Round both parts of ``x`` to the nearest multiple of ``2**-bits``.

    The rounding error satisfies ``|result - x| <= 2**-bits`` (each part moves by at
    most ``2**(-bits-1)``).
    """
    if bits < 0:
        raise ValueError("bits must be non-negative")
    return DyadicComplex.coerce(x).round(bits)
