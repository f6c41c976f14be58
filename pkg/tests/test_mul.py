import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polyeval.dyadic import Dyadic
from polyeval.errors import InsufficientInputPrecision
from polyeval.mul import (MulParams, approx_mul, exact_int_poly_mul, exact_mul, int_poly_mul,
                          kronecker_pack, kronecker_unpack)
from polyeval.oracle import ExactRationalPoly
from polyeval.poly import ApproxPoly, GaussianIntPoly

from helpers import dist1, pow2, rand_poly, seeded


def schoolbook(ar, ai, br, bi):
    n = len(ar) + len(br) - 1
    re, im = [0] * n, [0] * n
    for i, (a, b) in enumerate(zip(ar, ai)):
        for j, (c, d) in enumerate(zip(br, bi)):
            re[i + j] += a * c - b * d
            im[i + j] += a * d + b * c
    return re, im


def test_mul_params_formula():
    p = MulParams(ell=53, b=3, n=7)
    assert p.s == 53 + 3 + 2 * 3 + 2
    assert p.input_bits == p.s + 1


def test_exact_examples():
    one_plus = GaussianIntPoly([1, 1])
    one_minus = GaussianIntPoly([1, -1])
    assert exact_int_poly_mul(one_plus, one_minus) == GaussianIntPoly([1, 0, -1])
    i = GaussianIntPoly([0], [1])
    assert exact_int_poly_mul(i, i) == GaussianIntPoly([-1])


def test_random_64bit_against_schoolbook():
    rng = seeded(15)
    for _ in range(10):
        ar = [rng.getrandbits(64) - (1 << 63) for _ in range(16)]
        ai = [rng.getrandbits(64) - (1 << 63) for _ in range(16)]
        br = [rng.getrandbits(64) - (1 << 63) for _ in range(16)]
        bi = [rng.getrandbits(64) - (1 << 63) for _ in range(16)]
        got = exact_int_poly_mul(GaussianIntPoly(ar, ai), GaussianIntPoly(br, bi))
        assert got == GaussianIntPoly(*schoolbook(ar, ai, br, bi))


ints = st.integers(min_value=-(1 << 300), max_value=1 << 300)


@given(st.lists(ints, min_size=1, max_size=20), st.integers(min_value=1, max_value=4))
def test_kronecker_roundtrip(coeffs, extra):
    width = (max(abs(c) for c in coeffs).bit_length() + 8) // 8 + extra
    assert kronecker_unpack(kronecker_pack(coeffs, width), width, len(coeffs)) == coeffs


@given(st.lists(st.tuples(ints, ints), min_size=1, max_size=12),
       st.lists(st.tuples(ints, ints), min_size=1, max_size=12))
def test_int_poly_mul_matches_schoolbook(a, b):
    ar, ai = [x for x, _ in a], [y for _, y in a]
    br, bi = [x for x, _ in b], [y for _, y in b]
    re, im = int_poly_mul(ar, ai, br, bi)
    sr, si = schoolbook(ar, ai, br, bi)
    assert list(re) == sr and list(im) == si


def test_small_examples():
    f = ApproxPoly.from_coeffs([1, 1])
    out = approx_mul(f, f, 10)
    assert dist1(out, [1, 2, 1]) <= pow2(-10)
    zero = approx_mul(ApproxPoly.zero(), f, 30)
    assert zero.is_zero()


def test_random_degree7_ell53():
    rng = seeded(7)
    for _ in range(20):
        f = rand_poly(rng, 8, int_bits=0, frac_bits=16)
        g = rand_poly(rng, 8, int_bits=0, frac_bits=16)
        exact = ExactRationalPoly.from_approx(f) * ExactRationalPoly.from_approx(g)
        out = approx_mul(f, g, 53)
        assert out.err_bits >= 53
        assert dist1(out, exact) <= pow2(-53)
        assert len(out) == 15


@given(st.integers(min_value=1, max_value=64), st.integers(min_value=1, max_value=64),
       st.integers(min_value=0, max_value=200), st.integers(min_value=0, max_value=2 ** 32))
def test_certificate_with_inexact_inputs(n1, n2, ell, seed):
    rng = random.Random(seed)
    ft = rand_poly(rng, n1, int_bits=3, frac_bits=ell + 40)
    gt = rand_poly(rng, n2, int_bits=3, frac_bits=ell + 40)
    # stored approximations at the minimal admissible precision
    need = MulParams.for_operands(ft, gt, ell).input_bits
    f, g = ft.round(need + 1).with_err(need), gt.round(need + 1).with_err(need)
    out = approx_mul(f, g, ell)
    exact = ExactRationalPoly.from_approx(ft) * ExactRationalPoly.from_approx(gt)
    assert dist1(out, exact) <= pow2(-ell)
    assert len(out) == n1 + n2 - 1


def test_commutativity_within_two_ulps():
    rng = seeded(3)
    f, g = rand_poly(rng, 10, 4, 90), rand_poly(rng, 13, 2, 90)
    assert dist1(approx_mul(f, g, 60), approx_mul(g, f, 60)) <= pow2(-59)


def test_insufficient_input_precision():
    f = ApproxPoly.from_coeffs([Dyadic.from_fraction(Fraction(1, 3), 40)]).with_err(30)
    with pytest.raises(InsufficientInputPrecision) as info:
        approx_mul(f, f, 100)
    assert info.value.required > 100
    assert info.value.available == 30


def test_exact_mul_tracks_input_error():
    f = ApproxPoly.from_coeffs([1, 1], err_bits=40)
    g = ApproxPoly.from_coeffs([1, -1])
    assert exact_mul(f, g).err_bits >= 38
