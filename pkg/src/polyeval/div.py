"""Numerical polynomial division with certified residuals.

The quotient is obtained from a Newton power-series inverse of the reversed
divisor.  The remainder is then formed exactly as ``f - Q*g``: its low part is
the remainder proper and its high part ``H`` is an exactly known residual that
certifies the quotient.  Small quotients of monic divisors are computed by exact
long division instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import escalation_cap
from .dyadic import Dyadic, DyadicComplex, ceil_log2_int, round_shift
from .errors import (DegenerateDivisor, InsufficientInputPrecision, NotMonic,
                     PrecisionExhausted, ZeroDivisor)
from .mul import int_poly_mul
from .poly import EXACT, ApproxPoly, err_bits_of, norm_bits

__all__ = [
    "RootBound",
    "DivResult",
    "KernelResult",
    "series_inverse",
    "divrem_kernel",
    "div_normalized",
    "div_monic",
    "remainder_norm_limit",
]


@dataclass(frozen=True)
class RootBound:
    """All roots of the divisor have modulus below ``2**rho``."""

    rho: int

    def __post_init__(self):
        if int(self.rho) < 1:
            raise ValueError("root bound exponent must be at least 1")

    @classmethod
    def coerce(cls, rho) -> "RootBound":
        return rho if isinstance(rho, RootBound) else cls(int(rho))


@dataclass
class DivResult:
    quotient: ApproxPoly
    remainder: ApproxPoly
    residual_bits: int
    work_bits: int = 0
    retries: int = 0


@dataclass
class KernelResult:
    """``f = q*g + low + x**d * high`` exactly (for the stored f and g)."""

    q: ApproxPoly
    low: ApproxPoly
    high: ApproxPoly

    def high_degree(self, d: int) -> int:
        return d + self.high.degree


def _trunc(xs, k):
    xs = list(xs[:k])
    return xs + [0] * (k - len(xs))


def _round_list(xs, k):
    if k <= 0:
        return [x << -k for x in xs]
    return [round_shift(x, k) for x in xs]


def series_inverse(a: ApproxPoly, k: int, prec: int) -> ApproxPoly:
    """Power series ``h`` with ``a*h = 1 mod x**k``, coefficients on the grid ``2**-prec``.

    Newton iteration ``h <- h + h*(1 - a*h)``, doubling the order each step.
    """
    a0 = a.coeff(0)
    if not a0.re and not a0.im:
        raise ZeroDivisor("series inverse of a power series with zero constant term")
    if a0 == DyadicComplex(1, 0):
        hr, hi = [1 << prec], [0]
    else:
        fr, fi = a0.re.to_fraction(), a0.im.to_fraction()
        den = fr * fr + fi * fi
        hr = [Dyadic.from_fraction(fr / den, prec).scale(prec).floor()]
        hi = [Dyadic.from_fraction(-fi / den, prec).scale(prec).floor()]
    cur = 1
    ea = a.exp
    while cur < k:
        nxt = min(2 * cur, k)
        ar, ai = _trunc(a.re, nxt), _trunc(a.im, nxt)
        pr, pi = int_poly_mul(ar, ai, hr, hi)
        # a*h has exponent ea - prec; keep coefficients cur..nxt-1 of 1 - a*h on grid 2**-prec
        sh = -ea  # shift from exponent ea - prec down to -prec
        er = _round_list([-x for x in pr[cur:nxt]], sh)
        ei = _round_list([-x for x in pi[cur:nxt]], sh)
        cr, ci = int_poly_mul(hr, hi, er, ei)
        cr = _round_list(cr[: nxt - cur], prec)
        ci = _round_list(ci[: nxt - cur], prec)
        hr = hr + cr
        hi = hi + ci
        hr = hr + [0] * (nxt - len(hr))
        hi = hi + [0] * (nxt - len(hi))
        cur = nxt
    return ApproxPoly(hr[:k], hi[:k], -prec)


def _long_division_monic(f: ApproxPoly, g: ApproxPoly, d: int):
    """Exact long division by ``g`` whose degree-``d`` coefficient is exactly 1.

    Returns ``(q, r)``; no rounding happens, each step only rescales the running
    remainder by the exponent of ``g``.
    """
    if g.exp > 0:
        gr, gi, eg = [x << g.exp for x in g.re], [x << g.exp for x in g.im], 0
    else:
        gr, gi, eg = list(g.re), list(g.im), g.exp
    s = -eg
    rr, ri, e = list(f.re), list(f.im), f.exp
    m = len(rr) - 1 - d
    q = [DyadicComplex(0, 0)] * (m + 1)
    for j in range(m, -1, -1):
        tr, ti = rr[j + d], ri[j + d]
        if not tr and not ti:
            continue
        q[j] = DyadicComplex(Dyadic(tr, e), Dyadic(ti, e))
        if s:
            rr = [x << s for x in rr[: j + d]]
            ri = [x << s for x in ri[: j + d]]
            e -= s
        else:
            rr, ri = rr[: j + d], ri[: j + d]
        for k in range(d):
            cr, ci = gr[k], gi[k]
            if cr or ci:
                rr[j + k] -= tr * cr - ti * ci
                ri[j + k] -= tr * ci + ti * cr
    rr, ri = rr[:d], ri[:d]
    return ApproxPoly.from_coeffs(q), ApproxPoly(rr, ri, e)


def _difference(f: ApproxPoly, q: ApproxPoly, g: ApproxPoly):
    """Exact ``f - q*g`` as an ApproxPoly."""
    pr, pi = int_poly_mul(q.re, q.im, g.re, g.im)
    prod = ApproxPoly(pr, pi, q.exp + g.exp)
    return f.with_err(EXACT).sub(prod)


def divrem_kernel(f: ApproxPoly, g: ApproxPoly, q_bits: int, inv_bits: int,
                  exact_threshold: int = 4) -> KernelResult:
    """One division attempt: quotient on the grid ``2**-q_bits``, exact difference split
    into the remainder part (degrees ``< deg g``) and the high residual.

    When ``g`` is monic and the quotient has at most ``exact_threshold`` terms the
    quotient is exact (long division) and the high residual vanishes.
    """
    g = g.trimmed()
    d = g.degree
    if d < 0:
        raise ZeroDivisor("division by the zero polynomial")
    f = f.trimmed()
    df = f.degree
    if df < d:
        low = f.with_err(EXACT).padded(max(d, 1))
        return KernelResult(ApproxPoly.zero(), low.head(max(d, 1)), ApproxPoly.zero())
    m = df - d
    lead = g.coeff(d)
    if m + 1 <= exact_threshold and lead == DyadicComplex(1, 0) and d > 0:
        q, low = _long_division_monic(f, g, d)
        return KernelResult(q, low.padded(d), ApproxPoly.zero())
    else:
        a = g.reversed()  # constant term = leading coefficient of g
        inv = series_inverse(a, m + 1, inv_bits)
        rf = f.reversed()
        pr, pi = int_poly_mul(_trunc(rf.re, m + 1), _trunc(rf.im, m + 1), inv.re, inv.im)
        sh = -q_bits - (rf.exp + inv.exp)
        qr = _round_list(pr[: m + 1], sh)[::-1]
        qi = _round_list(pi[: m + 1], sh)[::-1]
        q = ApproxPoly(qr, qi, -q_bits)
        diff = _difference(f, q, g)
    diff = diff.padded(max(len(diff), d + 1))
    low = diff.head(max(d, 1))
    high = diff.tail(d) if d > 0 else diff
    if d == 0:
        low = ApproxPoly.zero()
    return KernelResult(q, low, high)


def _eps(bits) -> Dyadic:
    return Dyadic(0) if bits == EXACT else Dyadic(1, -bits)


def _round_poly(p: ApproxPoly, bits: int):
    """Round to ``bits`` fractional bits; returns (rounded, exact 1-norm deviation)."""
    k = -bits - p.exp
    if k <= 0:
        return p, Dyadic(0)
    re = [round_shift(a, k) for a in p.re]
    im = [round_shift(b, k) for b in p.im]
    dev = sum(abs(a - (r << k)) for a, r in zip(p.re, re)) + \
        sum(abs(b - (r << k)) for b, r in zip(p.im, im))
    return ApproxPoly(re, im, -bits), Dyadic(dev, p.exp)


def div_normalized(f: ApproxPoly, g: ApproxPoly, rho, ell: int, cap: int | None = None) -> DivResult:
    """Division of ``f`` (``||f|| <= 1``) by ``g`` (``1 <= ||g|| <= 2``, degree n) to ``ell`` bits.

    Inputs must carry ``ell + 32*n*rho`` bits.  Internally the residual against the
    supplied approximations is driven below ``2**-(ell + 32*n*rho + 1)``; then the
    quotient and remainder are ``ell``-bit approximations of the exact ones.
    """
    rho = RootBound.coerce(rho).rho
    g = g.trimmed()
    n = g.degree
    if n < 1:
        raise ValueError("divisor must have degree at least 1")
    if f.degree > 2 * n:
        raise ValueError("dividend degree exceeds twice the divisor degree")
    if g.norm_bound < 1:
        raise ValueError("divisor 1-norm must be at least 1")
    if f.norm_bound > 2 or g.norm_bound > 3:
        raise ValueError("operands are not normalized")
    ell_t = ell + 32 * n * rho
    for name, op in (("dividend", f), ("divisor", g)):
        if op.err_bits < ell_t:
            raise InsufficientInputPrecision(
                f"{name} carries {op.err_bits} bits, division needs {ell_t}",
                required=ell_t, available=op.err_bits)
    lead = g.coeff(n)
    if lead.abs_squared() < Dyadic(1, -8 * n * rho):
        raise DegenerateDivisor(f"leading coefficient of the divisor is below 2^-{4 * n * rho}")

    cap = escalation_cap() if cap is None else cap
    m = max(f.degree - n, 0)
    r_bits = ell_t + ceil_log2_int(n) + 3
    q_bits = ell_t + ceil_log2_int(m + 1) + 4
    work0 = work = ell_t + 5 * n * rho + 32 * n
    target = Dyadic(1, -(ell_t + 1))
    for attempt in range(cap + 1):
        kr = divrem_kernel(f, g, q_bits + work - work0, work, exact_threshold=0)
        r, dev = _round_poly(kr.low, r_bits)
        resid = kr.high.norm_bound + dev
        if resid <= target:
            break
        work *= 2
    else:
        raise PrecisionExhausted(f"division residual not certified after {cap} doublings")
    q = kr.q
    # residual against the implicit targets: f - f~ and Q~ (g~ - g) on top
    total = resid + _eps(f.err_bits) + q.norm_bound * _eps(g.err_bits)
    res_bits = min(ell, err_bits_of(total)) if total.mantissa else ell
    return DivResult(q.with_err(ell), r.trimmed().padded(max(n, 1)).with_err(ell),
                     res_bits, work_bits=work, retries=attempt)


def remainder_norm_limit(n: int, rho: int, b: int) -> int:
    """Exponent of the remainder bound ``2**(16n + 2n*rho + 2n*ceil(log2 2n) + b)``."""
    return 16 * n + 2 * n * rho + 2 * n * ceil_log2_int(2 * n) + b


def div_monic(f: ApproxPoly, g: ApproxPoly, rho, ell: int, cap: int | None = None) -> DivResult:
    """Division by a monic ``g`` of degree n whose roots lie below ``2**rho``.

    The problem is rescaled to ``f*(x) = 2**(-b-2ns) f(2**s x)`` and
    ``g*(x) = 2**(-ns) g(2**s x)`` with ``s = rho + ceil(log2 2n)``, divided at
    ``ell* = ell + b + 2ns`` bits, and scaled back.
    """
    rho = RootBound.coerce(rho).rho
    g = g.trimmed()
    n = g.degree
    if n < 0 or g.coeff(n) != DyadicComplex(1, 0):
        raise NotMonic("divisor leading coefficient is not exactly 1")
    if n == 0:
        # division by the constant 1
        return DivResult(f.with_err(ell) if f.err_bits >= ell else f, ApproxPoly.zero(), ell)
    b = norm_bits(f)
    s = rho + ceil_log2_int(2 * n)
    need = ell + b + n * (2 * rho + 2 * ceil_log2_int(2 * n) + 32)
    for name, op in (("dividend", f), ("divisor", g)):
        if op.err_bits < need:
            raise InsufficientInputPrecision(
                f"{name} carries {op.err_bits} bits, monic division needs {need}",
                required=need, available=op.err_bits)
    if f.degree < n:
        rem = f.trimmed().padded(n)
        return DivResult(ApproxPoly.zero(), rem.with_err(min(ell, f.err_bits) if f.err_bits != EXACT
                                                         else EXACT), ell)
    if f.degree > 2 * n:
        raise ValueError("dividend degree exceeds twice the divisor degree")
    ell_star = ell + b + 2 * n * s

    def dilated(p, shift, err):
        # exact p(2**s x) * 2**shift; error exponent supplied by the caller
        re = [a << (s * k) for k, a in enumerate(p.re)]
        im = [c << (s * k) for k, c in enumerate(p.im)]
        return ApproxPoly(re, im, p.exp + shift, err)

    f_err = f.err_bits if f.err_bits == EXACT else f.err_bits + b
    f_star = dilated(f, -b - 2 * n * s, f_err)
    g_star = dilated(g, -n * s, g.err_bits)
    res = div_normalized(f_star, g_star, 1, ell_star, cap=cap)

    def undilated(p, shift):
        # 2**shift * p(2**-s x), exact
        top = s * (len(p) - 1)
        re = [a << (top - s * k) for k, a in enumerate(p.re)]
        im = [c << (top - s * k) for k, c in enumerate(p.im)]
        return ApproxPoly(re, im, p.exp + shift - top, ell)

    q = undilated(res.quotient, b + n * s)
    r = undilated(res.remainder, 2 * n * s + b)
    return DivResult(q, r.padded(n), min(ell, res.residual_bits - b - 2 * n * s),
                     work_bits=res.work_bits, retries=res.retries)
