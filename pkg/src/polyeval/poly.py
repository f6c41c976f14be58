"""Approximate complex polynomials over dyadic fixed-point coefficients.

An :class:`ApproxPoly` holds Gaussian-integer mantissas with one shared binary
exponent, plus ``err_bits``: the certified statement that the stored polynomial
is within ``2**-err_bits`` (1-norm) of some implicit target polynomial.  Exact
polynomials carry ``err_bits == inf``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .dyadic import Dyadic, DyadicComplex, ceil_log2_int, round_shift

__all__ = [
    "EXACT",
    "ApproxPoly",
    "GaussianIntPoly",
    "err_add",
    "err_bits_of",
    "trunc_poly",
    "one_norm_bound",
    "norm_bits",
]

EXACT = math.inf


def err_add(*bits):
    """Error exponent of a sum of errors ``2**-b1 + 2**-b2 + ...`` (conservative)."""
    finite = [b for b in bits if b != EXACT]
    if not finite:
        return EXACT
    if len(finite) == 1:
        return finite[0]
    return min(finite) - ceil_log2_int(len(finite))


def err_bits_of(bound: Dyadic):
    """Largest integer ``e`` with ``bound <= 2**-e`` (``inf`` for a zero bound)."""
    if bound.mantissa == 0:
        return EXACT
    return -bound.ceil_log2()


def _abs_sum(re: Sequence[int], im: Sequence[int]) -> int:
    return sum(map(abs, re)) + sum(map(abs, im))


class ApproxPoly:
    """Complex polynomial ``sum_k (re[k] + i*im[k]) * 2**exp * x**k`` with a certified error.

    Instances are treated as immutable.  ``len(poly) - 1`` is the degree bound;
    leading zero coefficients are allowed.
    """

    __slots__ = ("re", "im", "exp", "err_bits", "_abs")

    def __init__(self, re: Sequence[int], im: Sequence[int] | None = None, exp: int = 0,
                 err_bits=EXACT):
        re = tuple(re)
        im = (0,) * len(re) if im is None else tuple(im)
        if len(re) != len(im):
            raise ValueError("real and imaginary parts differ in length")
        if not re:
            re, im = (0,), (0,)
        self.re = re
        self.im = im
        self.exp = int(exp)
        self.err_bits = err_bits
        self._abs = None

    # -- construction -----------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs: Iterable, err_bits=EXACT) -> "ApproxPoly":
        """Build from DyadicComplex / Dyadic / int / dyadic-Fraction / literal coefficients."""
        cs = [DyadicComplex.coerce(c) for c in coeffs]
        if not cs:
            return cls.zero()
        parts = [d for c in cs for d in (c.re, c.im) if d.mantissa]
        e = min((d.exponent for d in parts), default=0)
        re = [c.re.mantissa << (c.re.exponent - e) if c.re.mantissa else 0 for c in cs]
        im = [c.im.mantissa << (c.im.exponent - e) if c.im.mantissa else 0 for c in cs]
        return cls(re, im, e, err_bits)

    @classmethod
    def zero(cls, length: int = 1) -> "ApproxPoly":
        return cls((0,) * length, (0,) * length, 0)

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "ApproxPoly":
        return cls.from_coeffs([0] * k + [coeff])

    def with_err(self, err_bits) -> "ApproxPoly":
        return ApproxPoly(self.re, self.im, self.exp, err_bits)

    # -- inspection -------------------------------------------------------
    def __len__(self):
        return len(self.re)

    @property
    def degree_bound(self) -> int:
        return len(self.re) - 1

    @property
    def degree(self) -> int:
        """Index of the highest non-zero coefficient (-1 for the zero polynomial)."""
        for k in range(len(self.re) - 1, -1, -1):
            if self.re[k] or self.im[k]:
                return k
        return -1

    @property
    def coeffs(self) -> tuple:
        e = self.exp
        return tuple(DyadicComplex(Dyadic(a, e), Dyadic(b, e)) for a, b in zip(self.re, self.im))

    def coeff(self, k: int) -> DyadicComplex:
        if k < 0 or k >= len(self.re):
            return DyadicComplex(0, 0)
        return DyadicComplex(Dyadic(self.re[k], self.exp), Dyadic(self.im[k], self.exp))

    def is_zero(self) -> bool:
        return not any(self.re) and not any(self.im)

    def is_real(self) -> bool:
        return not any(self.im)

    def abs_mantissa_sum(self) -> int:
        if self._abs is None:
            self._abs = _abs_sum(self.re, self.im)
        return self._abs

    @property
    def norm_bound(self) -> Dyadic:
        """Exact upper bound on the 1-norm, within a factor sqrt(2) of it."""
        return Dyadic(self.abs_mantissa_sum(), self.exp)

    def norm_log2(self) -> int:
        """Smallest ``k`` with ``norm_bound <= 2**k``; a large negative value for zero."""
        s = self.abs_mantissa_sum()
        if s == 0:
            return -(1 << 30)
        return ceil_log2_int(s) + self.exp

    def fractional_bits(self) -> int:
        return max(0, -self.exp)

    def to_fractions(self) -> list:
        """Coefficients as ``(Fraction, Fraction)`` pairs."""
        e = self.exp
        if e >= 0:
            return [(Fraction(a << e), Fraction(b << e)) for a, b in zip(self.re, self.im)]
        d = 1 << -e
        return [(Fraction(a, d), Fraction(b, d)) for a, b in zip(self.re, self.im)]

    def to_complex(self) -> list:
        return [complex(c) for c in self.coeffs]

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"ApproxPoly([{shown}{more}], err_bits={self.err_bits})"

    def same_values(self, other: "ApproxPoly") -> bool:
        """Exact coefficient equality (ignoring trailing zeros and error exponents)."""
        return self.sub(other).is_zero()

    # -- exact transformations --------------------------------------------
    def aligned(self, exp: int) -> tuple:
        """Mantissas re-expressed at a smaller or equal exponent (exact)."""
        k = self.exp - exp
        if k < 0:
            raise ValueError("can only align to a smaller exponent")
        if k == 0:
            return self.re, self.im
        return tuple(a << k for a in self.re), tuple(b << k for b in self.im)

    def _binary(self, other: "ApproxPoly", sign: int) -> "ApproxPoly":
        e = min(self.exp, other.exp)
        ar, ai = self.aligned(e)
        br, bi = other.aligned(e)
        n = max(len(ar), len(br))
        ar = ar + (0,) * (n - len(ar))
        ai = ai + (0,) * (n - len(ai))
        br = br + (0,) * (n - len(br))
        bi = bi + (0,) * (n - len(bi))
        if sign > 0:
            re = [x + y for x, y in zip(ar, br)]
            im = [x + y for x, y in zip(ai, bi)]
        else:
            re = [x - y for x, y in zip(ar, br)]
            im = [x - y for x, y in zip(ai, bi)]
        return ApproxPoly(re, im, e, err_add(self.err_bits, other.err_bits))

    def add(self, other: "ApproxPoly") -> "ApproxPoly":
        return self._binary(other, 1)

    def sub(self, other: "ApproxPoly") -> "ApproxPoly":
        return self._binary(other, -1)

    __add__ = add
    __sub__ = sub

    def __neg__(self):
        return ApproxPoly([-a for a in self.re], [-b for b in self.im], self.exp, self.err_bits)

    def scale(self, k: int) -> "ApproxPoly":
        """Exact multiplication by ``2**k``."""
        return ApproxPoly(self.re, self.im, self.exp + k, self.err_bits - k)

    def mul_scalar(self, z) -> "ApproxPoly":
        """Exact product with a dyadic complex constant (error scaled by ``|re|+|im|``)."""
        z = DyadicComplex.coerce(z)
        e = min(z.re.exponent, z.im.exponent)
        c = z.re.mantissa << (z.re.exponent - e)
        d = z.im.mantissa << (z.im.exponent - e)
        re = [a * c - b * d for a, b in zip(self.re, self.im)]
        im = [a * d + b * c for a, b in zip(self.re, self.im)]
        err = self.err_bits
        if err != EXACT:
            if z.abs_bound().mantissa == 0:
                err = EXACT
            else:
                err = err - z.abs_bound().ceil_log2()
        return ApproxPoly(re, im, self.exp + e, err)

    def shift_x(self, k: int) -> "ApproxPoly":
        """Multiplication by ``x**k``."""
        return ApproxPoly((0,) * k + self.re, (0,) * k + self.im, self.exp, self.err_bits)

    def head(self, k: int) -> "ApproxPoly":
        """Coefficients ``0 .. k-1`` (no error bookkeeping: the caller owns the meaning)."""
        return ApproxPoly(self.re[:k], self.im[:k], self.exp, self.err_bits)

    def tail(self, k: int) -> "ApproxPoly":
        """Coefficients ``k ..`` shifted down to index 0."""
        return ApproxPoly(self.re[k:], self.im[k:], self.exp, self.err_bits)

    def padded(self, length: int) -> "ApproxPoly":
        extra = length - len(self.re)
        if extra <= 0:
            return self
        return ApproxPoly(self.re + (0,) * extra, self.im + (0,) * extra, self.exp, self.err_bits)

    def trimmed(self) -> "ApproxPoly":
        d = self.degree
        return ApproxPoly(self.re[: d + 1], self.im[: d + 1], self.exp, self.err_bits)

    def reversed(self, length: int | None = None) -> "ApproxPoly":
        """``x**(length-1) * p(1/x)`` for a length at least ``len(self)``."""
        p = self.padded(length) if length else self
        return ApproxPoly(p.re[::-1], p.im[::-1], p.exp, p.err_bits)

    def derivative(self) -> "ApproxPoly":
        n = len(self.re)
        if n <= 1:
            return ApproxPoly.zero()
        re = [k * self.re[k] for k in range(1, n)]
        im = [k * self.im[k] for k in range(1, n)]
        err = self.err_bits
        if err != EXACT:
            err = err - ceil_log2_int(n - 1)
        return ApproxPoly(re, im, self.exp, err)

    def dilate(self, s: int) -> "ApproxPoly":
        """Exact ``p(2**s * x)``.  The error exponent is updated for ``s <= 0`` only
        (then no coefficient error grows); for ``s > 0`` it is scaled by ``2**(s*deg)``."""
        n = len(self.re)
        if s >= 0:
            re = [a << (s * k) for k, a in enumerate(self.re)]
            im = [b << (s * k) for k, b in enumerate(self.im)]
            err = self.err_bits - s * (n - 1) if self.err_bits != EXACT else EXACT
            return ApproxPoly(re, im, self.exp, err)
        t = -s
        top = t * (n - 1)
        re = [a << (top - t * k) for k, a in enumerate(self.re)]
        im = [b << (top - t * k) for k, b in enumerate(self.im)]
        return ApproxPoly(re, im, self.exp - top, self.err_bits)

    # -- rounding ----------------------------------------------------------
    def round(self, bits: int) -> "ApproxPoly":
        """Round every coefficient to a multiple of ``2**-bits``; the error exponent
        absorbs the exact rounding deviation."""
        k = -bits - self.exp
        if k <= 0:
            return self
        re = [round_shift(a, k) for a in self.re]
        im = [round_shift(b, k) for b in self.im]
        out = ApproxPoly(re, im, -bits, self.err_bits)
        dev = rounding_deviation(self, out)
        out.err_bits = err_add(self.err_bits, err_bits_of(dev))
        return out

    def rounded_mantissas(self, bits: int) -> tuple:
        """Mantissas at exponent ``-bits`` (rounded if needed), without error bookkeeping."""
        k = -bits - self.exp
        if k <= 0:
            return self.aligned(-bits) if k < 0 else (self.re, self.im)
        return (tuple(round_shift(a, k) for a in self.re),
                tuple(round_shift(b, k) for b in self.im))

    # -- evaluation ---------------------------------------------------------
    def eval_exact(self, x) -> DyadicComplex:
        """Exact Horner evaluation at a dyadic complex point (bit growth is unbounded)."""
        x = DyadicComplex.coerce(x)
        acc = DyadicComplex(0, 0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def rounding_deviation(before: ApproxPoly, after: ApproxPoly) -> Dyadic:
    """Exact ``sum |re diff| + |im diff|`` between two polynomials."""
    e = min(before.exp, after.exp)
    ar, ai = before.aligned(e)
    br, bi = after.aligned(e)
    n = max(len(ar), len(br))
    ar = ar + (0,) * (n - len(ar))
    ai = ai + (0,) * (n - len(ai))
    br = br + (0,) * (n - len(br))
    bi = bi + (0,) * (n - len(bi))
    s = sum(abs(x - y) for x, y in zip(ar, br)) + sum(abs(x - y) for x, y in zip(ai, bi))
    return Dyadic(s, e)


class GaussianIntPoly:
    """Polynomial with exact Gaussian-integer coefficients."""

    __slots__ = ("re", "im")

    def __init__(self, re: Sequence[int], im: Sequence[int] | None = None):
        self.re = tuple(int(a) for a in re) or (0,)
        self.im = (0,) * len(self.re) if im is None else tuple(int(b) for b in im)
        if len(self.re) != len(self.im):
            raise ValueError("real and imaginary parts differ in length")

    def __len__(self):
        return len(self.re)

    def __eq__(self, other):
        if not isinstance(other, GaussianIntPoly):
            return NotImplemented
        n = max(len(self), len(other))
        pad = lambda t: t + (0,) * (n - len(t))  # noqa: E731
        return (pad(self.re) == pad(other.re)) and (pad(self.im) == pad(other.im))

    def __repr__(self):
        return f"GaussianIntPoly(re={list(self.re)}, im={list(self.im)})"

    def to_approx(self, exp: int = 0) -> ApproxPoly:
        return ApproxPoly(self.re, self.im, exp)


def trunc_poly(f: ApproxPoly, exp: int = 0) -> GaussianIntPoly:
    """Integer truncation: coefficient-wise nearest Gaussian integer of ``f * 2**-exp``.

    Each output coefficient is within ``sqrt(2)/2 <= 1`` of its input coefficient.
    """
    re, im = f.rounded_mantissas(-exp)
    return GaussianIntPoly(re, im)


def one_norm_bound(f: ApproxPoly) -> Dyadic:
    """``sum_k |re_k| + |im_k|``: exact upper bound B with ``||f||_1 <= B <= sqrt(2) ||f||_1``."""
    return f.norm_bound


def norm_bits(f: ApproxPoly) -> int:
    """Smallest ``b >= 1`` with ``norm_bound(f) < 2**b`` (so every coefficient modulus is < 2**b)."""
    s = f.abs_mantissa_sum()
    if s == 0:
        return 1
    return max(1, s.bit_length() + f.exp)
