"""Shared generators and exact distance checks for the test-suite."""

import random
from fractions import Fraction

from polyeval.dyadic import Dyadic, DyadicComplex
from polyeval.oracle import ExactRationalPoly
from polyeval.poly import ApproxPoly


def pow2(k):
    return Fraction(2) ** k


def rand_dyadic(rng, int_bits, frac_bits):
    lim = 1 << (int_bits + frac_bits)
    return Dyadic(rng.randrange(-lim + 1, lim), -frac_bits)


def rand_complex(rng, int_bits, frac_bits, real=False):
    re = rand_dyadic(rng, int_bits, frac_bits)
    return DyadicComplex(re, 0 if real else rand_dyadic(rng, int_bits, frac_bits))


def rand_poly(rng, n, int_bits=0, frac_bits=16, real=False):
    """``n`` coefficients with parts below ``2**int_bits``."""
    return ApproxPoly.from_coeffs([rand_complex(rng, int_bits, frac_bits, real) for _ in range(n)])


def rand_points(rng, n, gamma, frac_bits=32):
    """Distinct points with ``|re| + |im| <= 2**gamma``."""
    seen, out = set(), []
    while len(out) < n:
        z = rand_complex(rng, gamma - 1, frac_bits)
        if z not in seen:
            seen.add(z)
            out.append(z)
    return out


def q(z):
    z = DyadicComplex.coerce(z)
    return z.re.to_fraction(), z.im.to_fraction()


def cdist(a, b):
    """``|re| + |im|`` distance (an upper bound on the modulus) of two complex rationals."""
    a = q(a) if not isinstance(a, tuple) else a
    b = q(b) if not isinstance(b, tuple) else b
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def coeff_list(p):
    if isinstance(p, ApproxPoly):
        return p.to_fractions()
    if isinstance(p, ExactRationalPoly):
        return list(p.c)
    return [q(c) for c in p]


def dist1(a, b):
    """Sum over coefficients of ``|re| + |im|`` differences (bounds the 1-norm distance)."""
    x, y = coeff_list(a), coeff_list(b)
    n = max(len(x), len(y))
    z = (Fraction(0), Fraction(0))
    x = x + [z] * (n - len(x))
    y = y + [z] * (n - len(y))
    return sum((cdist(u, v) for u, v in zip(x, y)), Fraction(0))


def max_coeff_dist(a, b):
    x, y = coeff_list(a), coeff_list(b)
    n = max(len(x), len(y))
    z = (Fraction(0), Fraction(0))
    x = x + [z] * (n - len(x))
    y = y + [z] * (n - len(y))
    return max(cdist(u, v) for u, v in zip(x, y))


def seeded(seed):
    return random.Random(seed)
