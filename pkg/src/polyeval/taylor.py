"""Taylor shift ``F(x) -> F(m + x)`` by evaluation at ``m + omega^i`` and interpolation.

The interpolation nodes are dyadic approximations ``w_i`` of the n-th roots of
unity.  Because the values are taken at the exact points ``m + w_i``, the
interpolant through ``(w_i, F(m + w_i))`` is exactly ``F(m + x)``: approximating
the roots of unity only affects the conditioning, never the target.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dyadic import Dyadic, DyadicComplex, ceil_log2_int, round_shift
from .interp import InterpProblem, interpolate
from .mpeval import multipoint_eval
from .poly import ApproxPoly

__all__ = ["ShiftProblem", "pi_fixed", "cos_sin_fixed", "unit_circle_points", "taylor_shift"]


@dataclass
class ShiftProblem:
    F: ApproxPoly
    m: object
    L: int


def _cl2(n: int) -> int:
    return ceil_log2_int(n) if n > 0 else 0


def _atan_inv(x: int, w: int):
    """``(A, err)``: ``|A / 2**w - atan(1/x)| <= err / 2**w`` for integer ``x >= 2``."""
    total, k, err = 0, 0, 0
    power = (1 << w) // x          # floor(2**w / x**(2k+1))
    x2 = x * x
    while power:
        term = power // (2 * k + 1)
        total += -term if k & 1 else term
        err += 2                   # two floors per term
        k += 1
        power //= x2
    # alternating, decreasing tail: bounded by the first dropped term (< 1 ulp)
    return total, err + 1


def pi_fixed(w: int):
    """``(P, err)`` with ``|P / 2**w - pi| <= err / 2**w`` (Machin's formula)."""
    a, ea = _atan_inv(5, w)
    b, eb = _atan_inv(239, w)
    return 16 * a - 4 * b, 16 * ea + 4 * eb


def cos_sin_fixed(theta: int, w: int, theta_err: int = 0):
    """Fixed-point ``cos`` and ``sin`` of ``theta / 2**w`` (requires ``|theta| <= 4 * 2**w``).

    Returns ``(C, S, err)`` with both results within ``err`` ulps of the exact
    values at the true angle, given ``theta`` is within ``theta_err`` ulps of it.
    """
    if abs(theta) > 4 << w:
        raise ValueError("angle outside the series' comfortable range")
    one = 1 << w
    c, s = one, 0
    t, k = one, 0          # t ~ theta**k / k!
    dt, acc = 0, 0         # error of t, accumulated error of the sums
    while True:
        k += 1
        t = (t * theta >> w) // k
        # |theta| <= 4: the propagated error is scaled by 4/k, plus two floors
        dt = -((-dt * 4) // k) + 2
        if t == 0:
            break
        r = k % 4
        if r == 1:
            s += t
        elif r == 2:
            c -= t
        elif r == 3:
            s -= t
        else:
            c += t
        acc += dt
    # the dropped terms decrease at least geometrically with ratio 1/2 from here on,
    # and the first of them is below dt + 1 ulps
    return c, s, acc + 2 * dt + 4 + theta_err


def _unit_root(n: int, w: int):
    """``exp(2 pi i / n)`` on the ``2**-w`` grid, with error in ulps (``|re|+|im|`` measure)."""
    g = _cl2(w + 64) + 8
    W = w + g
    P, ep = pi_fixed(W + 3)
    # theta = 2 pi / n, kept on the W grid
    theta = (2 * P) // n >> 3
    theta_err = (2 * ep) // n // 8 + 2
    C, S, e = cos_sin_fixed(theta, W, theta_err)
    err_ulps = 2 * e        # re and im parts
    re, im = round_shift(C, g), round_shift(S, g)
    return re, im, (err_ulps >> g) + 2


def unit_circle_points(n: int, ell: int) -> list:
    """``w_0..w_{n-1}`` with ``|w_k - exp(2 pi i k / n)| <= 2**-ell``.

    ``n`` in {1, 2, 4} gives exact points.  Otherwise the generator comes from
    certified Machin and Taylor series, and the powers up to ``n/2`` are formed by
    repeated multiplication with re-rounding; quarter turns (when ``4 | n``) and
    conjugation supply the rest exactly.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if ell < 1:
        raise ValueError("ell must be positive")
    one, i_ = DyadicComplex(1, 0), DyadicComplex(0, 1)
    exact = {1: [one], 2: [one, -one], 4: [one, i_, -one, -i_]}
    if n in exact:
        return exact[n]
    w = ell + _cl2(n) + 6
    ur, ui, u_err = _unit_root(n, w)
    # Euclidean error of the k-th power in ulps of 2**-w: since |omega| = 1,
    # e_k <= e_{k-1} |u~| + u_err + 1 with |u~| <= 1 + u_err 2**-w
    half = n // 2
    quarter = n // 4 if n % 4 == 0 else None
    upto = quarter if quarter is not None else half
    pr, pi_, errs = [1 << w], [0], [0]
    ar, ai, e = 1 << w, 0, 0
    for _ in range(upto):
        ar, ai = round_shift(ar * ur - ai * ui, w), round_shift(ar * ui + ai * ur, w)
        e = e + (e * u_err >> w) + 1 + u_err + 1
        pr.append(ar)
        pi_.append(ai)
        errs.append(e)
    # |.|_1 <= 2 |.|; the final rounding adds 2**-(ell+1)
    if max(errs) > 1 << (w - ell - 2):
        raise ArithmeticError("unit circle points: error budget exceeded")
    pts = [DyadicComplex(Dyadic(a, -w), Dyadic(b, -w)).round(ell + 1) for a, b in zip(pr, pi_)]
    pts[0] = one
    if quarter is not None:
        pts[quarter] = i_
        # k in (n/4, n/2]: multiply by i exactly
        for k in range(quarter + 1, half + 1):
            z = pts[k - quarter]
            pts.append(DyadicComplex(-z.im, z.re))
    if n % 2 == 0:
        pts[half] = -one
    out = pts[: half + 1]
    for k in range(half + 1, n):
        out.append(out[n - k].conjugate())
    return out


def taylor_shift(F, m=None, L: int | None = None, workers=None,
                 stats: dict | None = None) -> ApproxPoly:
    """``G`` with ``||G - F(m + x)|| <= 2**-L``; also accepts a :class:`ShiftProblem`.

    ``F`` is queried through certified multipoint evaluation at ``m + w_i`` to
    whatever precision the interpolation asks for.  ``m = 0`` returns ``F`` as is.
    """
    if isinstance(F, ShiftProblem):
        F, m, L = F.F, F.m, F.L
    if m is None or L is None:
        raise TypeError("taylor_shift needs m and L")
    if not isinstance(F, ApproxPoly):
        F = ApproxPoly.from_coeffs(F)
    m = DyadicComplex.coerce(m)
    F = F.trimmed()
    n = len(F)
    if n == 1 or (m.re.mantissa == 0 and m.im.mantissa == 0):
        return F
    nodes = unit_circle_points(n, _cl2(n) + 8)
    pts = [m + z for z in nodes]

    def values(bits):
        return multipoint_eval(F, pts, bits, workers=workers)

    return interpolate(InterpProblem(nodes, values), L, workers=workers, stats=stats)
