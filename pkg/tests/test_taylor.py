import mpmath
import pytest

from polyeval.dyadic import DyadicComplex
from polyeval.errors import InsufficientInputPrecision
from polyeval.mpeval import multipoint_eval
from polyeval.oracle import ExactRationalPoly, exact_taylor_shift
from polyeval.poly import ApproxPoly
from polyeval.taylor import ShiftProblem, cos_sin_fixed, pi_fixed, taylor_shift, unit_circle_points

from helpers import cdist, dist1, pow2, rand_poly, seeded


def test_pi_fixed_against_mpmath():
    for w in (16, 100, 500):
        P, err = pi_fixed(w)
        with mpmath.workprec(w + 64):
            diff = abs(mpmath.mpf(P) / mpmath.mpf(2) ** w - mpmath.pi) * mpmath.mpf(2) ** w
            assert diff <= err
        assert err < 8 * w + 64          # a handful of ulps per series term


def test_cos_sin_against_mpmath():
    w = 120
    for num in (-3, -1, 0, 1, 2, 3):
        theta = num << w
        C, S, err = cos_sin_fixed(theta, w)
        with mpmath.workprec(w + 64):
            scale = mpmath.mpf(2) ** w
            assert abs(C / scale - mpmath.cos(num)) * scale <= err
            assert abs(S / scale - mpmath.sin(num)) * scale <= err
    with pytest.raises(ValueError):
        cos_sin_fixed(5 << 10, 10)


def mpc_of(z):
    re, im = z.re.to_fraction(), z.im.to_fraction()
    return mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                      mpmath.mpf(im.numerator) / im.denominator)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 12, 64])
def test_unit_circle_points(n):
    ell = 90
    pts = unit_circle_points(n, ell)
    assert len(pts) == n and len(set(pts)) == n
    with mpmath.workprec(ell + 40):
        for k, z in enumerate(pts):
            ref = mpmath.exp(2j * mpmath.pi * k / n)
            d = abs(mpc_of(z) - ref)
            assert d <= mpmath.mpf(2) ** -ell


def test_unit_circle_exact_cases():
    assert unit_circle_points(4, 5) == [DyadicComplex(1, 0), DyadicComplex(0, 1),
                                        DyadicComplex(-1, 0), DyadicComplex(0, -1)]
    with pytest.raises(ValueError):
        unit_circle_points(0, 10)


def test_square_shifted_by_one():
    F = ApproxPoly.from_coeffs([0, 0, 1])
    G = taylor_shift(F, 1, 80)
    assert dist1(G, [1, 2, 1]) <= pow2(-80)


def test_degree31_complex_shift():
    rng = seeded(31)
    F = rand_poly(rng, 32, 11, 12)                 # 1-norm about 2**16
    m = DyadicComplex(3, 2)
    G = taylor_shift(ShiftProblem(F, m, 256))
    assert dist1(G, exact_taylor_shift(F, m)) <= pow2(-256)


def test_zero_shift_returns_input():
    rng = seeded(1)
    F = rand_poly(rng, 9, 2, 16)
    assert dist1(taylor_shift(F, 0, 100), F) == 0


def test_shift_involution_and_consistency():
    rng = seeded(5)
    F = rand_poly(rng, 12, 2, 16)
    m = DyadicComplex.from_literal("0x3p-1+0x1p-2i")
    G = taylor_shift(F, m, 300)
    back = taylor_shift(G, -m, 120)
    assert dist1(back, F) <= pow2(-119)
    # shifting back needs more than G carries when G is coarse
    with pytest.raises(InsufficientInputPrecision):
        taylor_shift(taylor_shift(F, m, 150), -m, 120)
    # G(x) = F(m + x) at a few points
    xs = [DyadicComplex(0, 0), DyadicComplex(1, 0), DyadicComplex(0, -1)]
    EF = ExactRationalPoly.from_approx(F)
    for x, y in zip(xs, multipoint_eval(G, xs, 150)):
        assert cdist(y, EF(m + x)) <= pow2(-150) + 2 * pow2(-300)


def test_requires_arguments():
    with pytest.raises(TypeError):
        taylor_shift(ApproxPoly.from_coeffs([1, 1]))
