"""Polynomial multiplication: exact Kronecker products and certified approximate products."""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .dyadic import Dyadic, ceil_log2_int, round_shift
from .errors import InsufficientInputPrecision
from .poly import EXACT, ApproxPoly, GaussianIntPoly, err_bits_of, norm_bits

__all__ = [
    "MulParams",
    "kronecker_pack",
    "kronecker_unpack",
    "int_poly_mul",
    "exact_int_poly_mul",
    "exact_mul",
    "approx_mul",
    "required_input_bits",
]

_mpz = gmpy2.mpz


def _slot_bytes(bits: int) -> int:
    return max(1, (bits + 7) // 8)


def kronecker_pack(coeffs, width: int) -> int:
    """Evaluate ``sum c_k * 2**(8*width*k)`` for signed ``c_k`` with ``|c_k| < 2**(8*width)``."""
    pos = b"".join((c if c > 0 else 0).to_bytes(width, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(width, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def kronecker_unpack(value: int, width: int, count: int) -> list:
    """Inverse of :func:`kronecker_pack` for digits in ``[-2**(8*width-1), 2**(8*width-1))``."""
    bias = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * count, "little")
    raw = (value + bias).to_bytes(width * count, "little")
    half = 1 << (8 * width - 1)
    return [int.from_bytes(raw[i:i + width], "little") - half for i in range(0, width * count, width)]


def _maxabs(xs) -> int:
    return max(map(abs, xs), default=0)


def _big_mul(x: int, y: int) -> int:
    # GMP beats CPython's Karatsuba by a wide margin on large operands
    if x.bit_length() < 2000 or y.bit_length() < 2000:
        return x * y
    return int(_mpz(x) * _mpz(y))


def int_poly_mul(ar, ai, br, bi):
    """Exact product of Gaussian-integer coefficient sequences ``(ar + i ai) * (br + i bi)``.

    ``ai`` / ``bi`` may be ``None`` for real operands.  Returns ``(re, im)`` lists of
    length ``len(ar) + len(br) - 1``.
    """
    na, nb = len(ar), len(br)
    out_len = na + nb - 1
    a_real = ai is None or not any(ai)
    b_real = bi is None or not any(bi)
    if a_real:
        ai = None
    if b_real:
        bi = None
    zero = [0] * out_len

    if na == 1 or nb == 1:
        # scalar times polynomial: no packing needed
        if nb != 1:
            ar, ai, br, bi, na, nb = br, bi, ar, ai, nb, na
        c = br[0]
        d = 0 if bi is None else bi[0]
        if ai is None:
            return [a * c for a in ar], ([a * d for a in ar] if d else zero)
        return ([a * c - b * d for a, b in zip(ar, ai)], [a * d + b * c for a, b in zip(ar, ai)])

    sa = _maxabs(ar) + (0 if ai is None else _maxabs(ai))
    sb = _maxabs(br) + (0 if bi is None else _maxabs(bi))
    if sa == 0 or sb == 0:
        return zero, list(zero)
    bits = sa.bit_length() + sb.bit_length() + ceil_log2_int(min(na, nb)) + 2
    w = _slot_bytes(bits)

    A = kronecker_pack(ar, w)
    C = kronecker_pack(br, w)
    if ai is None and bi is None:
        return kronecker_unpack(_big_mul(A, C), w, out_len), zero
    if ai is None:
        D = kronecker_pack(bi, w)
        return (kronecker_unpack(_big_mul(A, C), w, out_len),
                kronecker_unpack(_big_mul(A, D), w, out_len))
    B = kronecker_pack(ai, w)
    if bi is None:
        return (kronecker_unpack(_big_mul(A, C), w, out_len),
                kronecker_unpack(_big_mul(B, C), w, out_len))
    D = kronecker_pack(bi, w)
    ac = _big_mul(A, C)
    bd = _big_mul(B, D)
    cross = _big_mul(A + B, C + D)
    return (kronecker_unpack(ac - bd, w, out_len),
            kronecker_unpack(cross - ac - bd, w, out_len))


def exact_int_poly_mul(F: GaussianIntPoly, G: GaussianIntPoly) -> GaussianIntPoly:
    """Exact product of two Gaussian-integer polynomials by Kronecker substitution."""
    re, im = int_poly_mul(F.re, F.im, G.re, G.im)
    return GaussianIntPoly(re, im)


def _eps(err_bits) -> Dyadic:
    return Dyadic(0) if err_bits == EXACT else Dyadic(1, -err_bits)


def product_error(f: ApproxPoly, g: ApproxPoly) -> Dyadic:
    """Bound on ``||f*g - f_target*g_target||`` for the exact product of the stored polys."""
    ef, eg = _eps(f.err_bits), _eps(g.err_bits)
    return ef * g.norm_bound + f.norm_bound * eg + ef * eg


def exact_mul(f: ApproxPoly, g: ApproxPoly) -> ApproxPoly:
    """Exact product of the stored polynomials; the error exponent covers input errors."""
    re, im = int_poly_mul(f.re, f.im, g.re, g.im)
    out = ApproxPoly(re, im, f.exp + g.exp)
    if f.err_bits != EXACT or g.err_bits != EXACT:
        out.err_bits = err_bits_of(product_error(f, g))
    return out


@dataclass(frozen=True)
class MulParams:
    """Parameters of one certified multiplication: ``s = l + b + 2*ceil(log2(n+1)) + 2``."""

    ell: int
    b: int
    n: int

    @property
    def s(self) -> int:
        return self.ell + self.b + 2 * ceil_log2_int(self.n + 1) + 2

    @property
    def input_bits(self) -> int:
        return self.ell + self.b + 2 * ceil_log2_int(self.n + 1) + 3

    @classmethod
    def for_operands(cls, f: ApproxPoly, g: ApproxPoly, ell: int) -> "MulParams":
        n = max(len(f), len(g)) - 1
        return cls(ell, max(norm_bits(f), norm_bits(g)), n)


def required_input_bits(f: ApproxPoly, g: ApproxPoly, ell: int) -> int:
    return MulParams.for_operands(f, g, ell).input_bits


def _truncate(f: ApproxPoly, s: int):
    """Mantissas of ``f`` on the grid ``2**-s`` (or finer, if already exact there) and
    the exact 1-norm deviation introduced."""
    k = -s - f.exp
    if k <= 0:
        return f.re, f.im, f.exp, Dyadic(0)
    re = [round_shift(a, k) for a in f.re]
    im = [round_shift(b, k) for b in f.im]
    dev = 0
    for a, r in zip(f.re, re):
        dev += abs(a - (r << k))
    for b, r in zip(f.im, im):
        dev += abs(b - (r << k))
    return re, im, -s, Dyadic(dev, f.exp)


def approx_mul(f: ApproxPoly, g: ApproxPoly, ell: int) -> ApproxPoly:
    """Certified ``ell``-bit 1-norm approximation of the product of the targets of f and g.

    Both operands are scaled by ``2**s``, truncated to Gaussian integers, multiplied
    exactly, and shifted back; the output is rounded to ``ell + ceil(log2(len)) + 3``
    fractional bits.  Raises :class:`InsufficientInputPrecision` if an operand's error
    exponent is below ``ell + b + 2*ceil(log2(n+1)) + 3``.
    """
    params = MulParams.for_operands(f, g, ell)
    need = params.input_bits
    for name, op in (("left", f), ("right", g)):
        if op.err_bits < need:
            raise InsufficientInputPrecision(
                f"{name} operand carries {op.err_bits} bits, multiplication needs {need}",
                required=need, available=op.err_bits)
    s = params.s
    fr, fi, fe, dev_f = _truncate(f, s)
    gr, gi, ge, dev_g = _truncate(g, s)
    re, im = int_poly_mul(fr, fi, gr, gi)
    exp = fe + ge

    out_len = len(re)
    p = ell + ceil_log2_int(out_len) + 3
    k = -p - exp
    dev_out = Dyadic(0)
    if k > 0:
        rr = [round_shift(a, k) for a in re]
        ri = [round_shift(b, k) for b in im]
        d = sum(abs(a - (r << k)) for a, r in zip(re, rr)) + sum(abs(b - (r << k)) for b, r in zip(im, ri))
        dev_out = Dyadic(d, exp)
        re, im, exp = rr, ri, -p

    # a-posteriori bound: (f' - f) g' + f (g' - g) + output rounding
    ef, eg = _eps(f.err_bits), _eps(g.err_bits)
    g_trunc_norm = Dyadic(sum(map(abs, gr)) + sum(map(abs, gi)), ge)
    total = (ef + dev_f) * g_trunc_norm + (f.norm_bound + ef) * (eg + dev_g) + dev_out
    if total > Dyadic(1, -ell):
        raise ArithmeticError("multiplication error bound exceeded; input contract violated")
    return ApproxPoly(re, im, exp, EXACT if total.mantissa == 0 else ell)
