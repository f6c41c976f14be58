import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polyeval.dyadic import Dyadic, DyadicComplex
from polyeval.errors import CoincidentPoints, InsufficientInputPrecision
from polyeval.interp import InterpProblem, combine_layer, interpolate, lagrange_denominators
from polyeval.mpeval import SubproductTree, multipoint_eval
from polyeval.oracle import ExactRationalPoly, exact_lagrange, exact_product
from polyeval.poly import ApproxPoly
from polyeval.taylor import unit_circle_points

from helpers import cdist, dist1, pow2, rand_points, rand_poly, seeded


def test_two_points():
    F = interpolate(InterpProblem([0, 1], [-1, 1]), 60)
    assert dist1(F, [-1, 2]) <= pow2(-60)
    F = interpolate(InterpProblem([0, 1], [1, 2]), 60)
    assert dist1(F, [1, 1]) <= pow2(-60)


def test_single_point_and_zeros():
    F = interpolate(InterpProblem([DyadicComplex(3, 1)], [DyadicComplex(5, -7)]), 30)
    assert dist1(F, [DyadicComplex(5, -7)]) <= pow2(-30)
    F = interpolate(InterpProblem(range(6), [0] * 6), 50)
    assert dist1(F, [0]) <= pow2(-50)


def test_lagrange_denominators_roots_of_unity():
    # g = x^n - 1 at an n-th root w has g'(w) = n w^(n-1), so |lambda| = n
    n = 8
    pts = unit_circle_points(n, 100)
    lam = lagrange_denominators(SubproductTree(pts), 60)
    exact = exact_product(pts).derivative()
    for x, l in zip(pts, lam):
        assert cdist(l, exact(x)) <= pow2(-60)
        a, b = (float(t) for t in (l.re.to_fraction(), l.im.to_fraction()))
        assert abs((a * a + b * b) ** 0.5 - n) < 1e-9


def test_eight_points_against_exact():
    rng = seeded(8)
    pts = rand_points(rng, 8, 2, 16)
    vals = [DyadicComplex(Dyadic(rng.randrange(-999, 999), -4), Dyadic(rng.randrange(-999, 999), -4))
            for _ in pts]
    F = interpolate(InterpProblem(pts, vals), 100)
    assert dist1(F, exact_lagrange(pts, vals)) <= pow2(-100)


def test_roundtrip_degree15_L200():
    rng = seeded(15)
    G = rand_poly(rng, 16, 2, 20)
    pts = rand_points(rng, 16, 2, 20)
    E = ExactRationalPoly.from_approx(G)
    vals = [DyadicComplex(Dyadic.from_fraction(E(x)[0], 400), Dyadic.from_fraction(E(x)[1], 400))
            for x in pts]
    st = {}
    F = interpolate(InterpProblem(pts, vals, value_err_bits=399), 200, stats=st)
    assert dist1(F, G) <= pow2(-199)
    assert st["value_bits"] <= 399
    # through a value oracle the exact input is recovered to 2**-200
    F = interpolate(InterpProblem(pts, lambda bits: multipoint_eval(G, pts, bits)), 200)
    assert dist1(F, G) <= pow2(-200)


def test_coarse_values_raise():
    with pytest.raises(InsufficientInputPrecision):
        interpolate(InterpProblem([0, 1, 2], [1, 2, 3], value_err_bits=10), 100)


def test_coincident_points():
    with pytest.raises(CoincidentPoints):
        interpolate(InterpProblem([0, 1, 0], [1, 2, 3]), 10)


def test_combine_layer_two_leaves():
    # mu_0 (x - x_1) + mu_1 (x - x_0)
    m0, m1 = ApproxPoly.from_coeffs([2]), ApproxPoly.from_coeffs([3])
    g0, g1 = ApproxPoly.from_coeffs([-1, 1]), ApproxPoly.from_coeffs([1, 1])
    out = combine_layer(m0, m1, g0, g1, 40)
    assert dist1(out, [2 - 3, 5]) <= pow2(-40)


def test_combine_layer_four_points():
    pts = [0, 1, 2, 3]
    vals = [1, -1, 2, 5]
    lam = [ExactRationalPoly(exact_product(pts).c).derivative()(p) for p in pts]
    mus = [Fraction(v) / l[0] for v, l in zip(vals, lam)]
    leaf = [ApproxPoly.from_coeffs([Dyadic.from_fraction(m, 200)]) for m in mus]
    g = [ApproxPoly.from_coeffs(exact_product([p]).c) for p in pts]
    left = combine_layer(leaf[0], leaf[1], g[0], g[1], 150)
    right = combine_layer(leaf[2], leaf[3], g[2], g[3], 150)
    gl = ApproxPoly.from_coeffs(exact_product(pts[:2]).c)
    gr = ApproxPoly.from_coeffs(exact_product(pts[2:]).c)
    out = combine_layer(left, right, gl, gr, 100)
    assert dist1(out, exact_lagrange(pts, vals)) <= pow2(-100)


@settings(max_examples=12)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=1, max_value=3),
       st.integers(min_value=0, max_value=120), st.integers(min_value=0, max_value=2 ** 32))
def test_error_bound_and_permutation_invariance(n, gamma, L, seed):
    rng = random.Random(seed)
    pts = rand_points(rng, n, gamma, 10)
    vals = [DyadicComplex(Dyadic(rng.randrange(-99, 99), -3), 0) for _ in pts]
    F = interpolate(InterpProblem(pts, vals), L)
    exact = exact_lagrange(pts, vals)
    assert dist1(F, exact) <= pow2(-L)
    order = list(range(n))
    rng.shuffle(order)
    G = interpolate(InterpProblem([pts[i] for i in order], [vals[i] for i in order]), L)
    assert dist1(G, exact) <= pow2(-L)
