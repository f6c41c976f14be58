"""Brute-force reference routines.

Everything here is quadratic time and deliberately shares no code with the fast
path beyond the scalar types: exact complex-rational polynomial arithmetic, a
certified Horner evaluator, long division, and the Lagrange formula.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import Dyadic, DyadicComplex, ceil_log2_int
from .errors import CoincidentPoints, ZeroDivisor
from .poly import ApproxPoly

__all__ = [
    "ExactRationalPoly",
    "horner_eval_hp",
    "exact_divmod",
    "exact_lagrange",
    "exact_product",
    "exact_taylor_shift",
]

_Z = (Fraction(0), Fraction(0))


def _q(z):
    """Complex rational ``(re, im)`` from anything DyadicComplex-like, a Fraction or a pair."""
    if isinstance(z, tuple):
        return Fraction(z[0]), Fraction(z[1])
    if isinstance(z, (int, Fraction)):
        return Fraction(z), Fraction(0)
    z = DyadicComplex.coerce(z)
    return z.re.to_fraction(), z.im.to_fraction()


def _cmul(a, b):
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _cdiv(a, b):
    den = b[0] * b[0] + b[1] * b[1]
    if den == 0:
        raise ZeroDivisionError("complex division by zero")
    return ((a[0] * b[0] + a[1] * b[1]) / den, (a[1] * b[0] - a[0] * b[1]) / den)


class ExactRationalPoly:
    """Polynomial with exact complex-rational coefficients ``(re, im)``, lowest power first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [_q(z) for z in coeffs]
        while len(c) > 1 and c[-1] == _Z:
            c.pop()
        self.c = c or [_Z]

    @classmethod
    def from_approx(cls, f: ApproxPoly) -> "ExactRationalPoly":
        return cls(f.to_fractions())

    @property
    def degree(self) -> int:
        if len(self.c) == 1 and self.c[0] == _Z:
            return -1
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __eq__(self, other):
        if not isinstance(other, ExactRationalPoly):
            other = ExactRationalPoly.from_approx(other) if isinstance(other, ApproxPoly) \
                else ExactRationalPoly(other)
        return self.c == other.c

    def __repr__(self):
        return f"ExactRationalPoly({self.c!r})"

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        a = self.c + [_Z] * (n - len(self.c))
        b = other.c + [_Z] * (n - len(other.c))
        return ExactRationalPoly([(x[0] + y[0], x[1] + y[1]) for x, y in zip(a, b)])

    def __neg__(self):
        return ExactRationalPoly([(-x[0], -x[1]) for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExactRationalPoly):
            z = _q(other)
            return ExactRationalPoly([_cmul(x, z) for x in self.c])
        out = [[Fraction(0), Fraction(0)] for _ in range(len(self.c) + len(other.c) - 1)]
        for i, x in enumerate(self.c):
            if x == _Z:
                continue
            for j, y in enumerate(other.c):
                p = _cmul(x, y)
                out[i + j][0] += p[0]
                out[i + j][1] += p[1]
        return ExactRationalPoly([tuple(v) for v in out])

    __rmul__ = __mul__

    def __call__(self, x):
        x = _q(x)
        acc = _Z
        for c in reversed(self.c):
            acc = _cmul(acc, x)
            acc = (acc[0] + c[0], acc[1] + c[1])
        return acc

    def one_norm_bound(self) -> Fraction:
        """``sum |re| + |im|`` (exact, at most sqrt(2) above the 1-norm)."""
        return sum((abs(a) + abs(b) for a, b in self.c), Fraction(0))

    def derivative(self):
        return ExactRationalPoly([(k * a, k * b) for k, (a, b) in enumerate(self.c)][1:] or [_Z])


def _as_exact(f) -> ExactRationalPoly:
    if isinstance(f, ExactRationalPoly):
        return f
    if isinstance(f, ApproxPoly):
        return ExactRationalPoly.from_approx(f)
    return ExactRationalPoly(f)


def horner_eval_hp(F, x, bits: int) -> DyadicComplex:
    """Value within ``2**-bits`` of ``F(x)`` (stored coefficients of F taken as exact).

    Horner's scheme with every intermediate rounded to ``w`` fractional bits, where
    ``w = bits + deg*ceil(log2 max(1,|x|)) + ceil(log2(deg+1)) + 2``.  Each step
    contributes at most ``2**-w`` (product rounding plus coefficient rounding), and the
    step-``k`` error is amplified by ``|x|**k``.
    """
    if bits < 1:
        raise ValueError("bits must be at least 1")
    if not isinstance(F, ApproxPoly):
        F = ApproxPoly.from_coeffs(F)
    x = DyadicComplex.coerce(x)
    deg = max(len(F) - 1, 0)
    xb = x.abs_bound()
    gam = max(0, xb.ceil_log2()) if xb.mantissa else 0
    w = bits + deg * gam + ceil_log2_int(deg + 1) + 2

    ex = min(x.re.exponent, x.im.exponent)
    xr = x.re.mantissa << (x.re.exponent - ex)
    xi = x.im.mantissa << (x.im.exponent - ex)

    def to_grid(m, e):
        # nearest integer to m * 2**(e + w)
        k = e + w
        if k >= 0:
            return m << k
        return (2 * m + (1 << -k)) >> (-k + 1)

    ar = ai = 0
    for k in range(len(F) - 1, -1, -1):
        pr = ar * xr - ai * xi
        pi = ar * xi + ai * xr
        # (pr + i pi) * 2**(ex - w) rounded back onto the 2**-w grid
        ar = to_grid(pr, ex - w) + to_grid(F.re[k], F.exp)
        ai = to_grid(pi, ex - w) + to_grid(F.im[k], F.exp)
    return DyadicComplex(Dyadic(ar, -w), Dyadic(ai, -w))


def exact_divmod(f, g):
    """Exact long division ``f = Q g + R`` with ``deg R < deg g``."""
    f, g = _as_exact(f), _as_exact(g)
    if g.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    n = g.degree
    lead = g.c[n]
    rem = [list(c) for c in f.c]
    if f.degree < n:
        return ExactRationalPoly([_Z]), ExactRationalPoly(f.c)
    m = f.degree - n
    q = [_Z] * (m + 1)
    for k in range(m, -1, -1):
        t = _cdiv(tuple(rem[k + n]), lead)
        q[k] = t
        if t == _Z:
            continue
        for j in range(n + 1):
            p = _cmul(t, g.c[j])
            rem[k + j][0] -= p[0]
            rem[k + j][1] -= p[1]
    return ExactRationalPoly(q), ExactRationalPoly([tuple(c) for c in rem[:n]] or [_Z])


def exact_product(points) -> ExactRationalPoly:
    """``prod (x - x_j)`` exactly."""
    out = ExactRationalPoly([1])
    for p in points:
        z = _q(p)
        out = out * ExactRationalPoly([(-z[0], -z[1]), 1])
    return out


def exact_lagrange(points, values) -> ExactRationalPoly:
    """The unique interpolant of degree ``< n`` through ``(points[i], values[i])``."""
    pts = [_q(p) for p in points]
    vals = [_q(v) for v in values]
    if len(pts) != len(vals):
        raise ValueError("points and values differ in length")
    if len(set(pts)) != len(pts):
        raise CoincidentPoints("interpolation nodes are not distinct")
    if not pts:
        return ExactRationalPoly([_Z])
    master = exact_product(pts).c
    n = len(pts)
    out = [[Fraction(0), Fraction(0)] for _ in range(n)]
    for i, xi in enumerate(pts):
        if vals[i] == _Z:
            continue
        # master / (x - xi) by synthetic division
        quot = [_Z] * n
        acc = _Z
        for k in range(n, 0, -1):
            acc = (master[k][0] + acc[0], master[k][1] + acc[1])
            quot[k - 1] = acc
            acc = _cmul(acc, xi)
        lam = _Z
        for c in reversed(quot):
            lam = _cmul(lam, xi)
            lam = (lam[0] + c[0], lam[1] + c[1])
        w = _cdiv(vals[i], lam)
        for k in range(n):
            p = _cmul(w, quot[k])
            out[k][0] += p[0]
            out[k][1] += p[1]
    return ExactRationalPoly([tuple(c) for c in out])


def exact_taylor_shift(F, m) -> ExactRationalPoly:
    """Coefficients of ``F(m + x)`` by repeated synthetic division (Horner shift)."""
    c = [list(z) for z in _as_exact(F).c]
    mz = _q(m)
    n = len(c)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            p = _cmul(tuple(c[k + 1]), mz)
            c[k][0] += p[0]
            c[k][1] += p[1]
    return ExactRationalPoly([tuple(z) for z in c])
