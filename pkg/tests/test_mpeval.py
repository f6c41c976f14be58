import random

import pytest
from hypothesis import given, settings, strategies as st

from polyeval.dyadic import Dyadic, DyadicComplex
from polyeval.mpeval import (DIV_CONST, EvalStats, SubproductTree, build_subproduct_tree,
                             multipoint_eval, point_gamma, remainder_layer, schedule_precisions)
from polyeval.oracle import ExactRationalPoly, exact_divmod, exact_product
from polyeval.poly import ApproxPoly
from polyeval.taylor import unit_circle_points

from helpers import cdist, dist1, pow2, rand_points, rand_poly, seeded


def check_values(F, pts, ys, L):
    E = ExactRationalPoly.from_approx(F)
    for x, y in zip(pts, ys):
        assert cdist(y, E(x)) <= pow2(-L)


def test_monomial_small_points():
    for n in (1, 2, 5, 17):
        F = ApproxPoly.from_coeffs([0] * n + [1])
        ys = multipoint_eval(F, [0, 1], 40)
        check_values(F, [0, 1], ys, 40)


def test_constant_and_zero():
    F = ApproxPoly.from_coeffs([DyadicComplex(3, -1)])
    assert multipoint_eval(F, [5, -7, DyadicComplex(0, 1)], 10) == [DyadicComplex(3, -1)] * 3
    assert multipoint_eval(ApproxPoly.zero(), [1, 2], 10) == [DyadicComplex(0, 0)] * 2
    assert multipoint_eval(F, [], 10) == []


def test_random_deg63_gamma4_L256():
    rng = seeded(63)
    for _ in range(2):
        F = rand_poly(rng, 64, int_bits=10, frac_bits=20)       # tau about 16
        pts = rand_points(rng, 64, 4, 24)
        st = EvalStats()
        ys = multipoint_eval(F, pts, 256, stats=st)
        check_values(F, pts, ys, 256)
        assert st.divisions > 0


def test_roots_of_unity_on_x_n_minus_1():
    n = 32
    F = ApproxPoly.from_coeffs([-1] + [0] * (n - 1) + [1])
    pts = unit_circle_points(n, 80)
    ys = multipoint_eval(F, pts, 60)
    check_values(F, pts, ys, 60)
    # the nodes are within 2**-80 of the roots, so the values are tiny
    for y in ys:
        assert cdist(y, 0) <= pow2(-70)


def test_more_points_than_coefficients_and_vice_versa():
    rng = seeded(4)
    F = rand_poly(rng, 5, 2, 16)
    pts = rand_points(rng, 37, 3, 16)
    check_values(F, pts, multipoint_eval(F, pts, 100), 100)
    G = rand_poly(rng, 50, 2, 16)
    few = rand_points(rng, 3, 3, 16)
    check_values(G, few, multipoint_eval(G, few, 100), 100)


@pytest.mark.parametrize("m", [3, 5, 6, 7, 11, 13])
def test_non_power_of_two(m):
    rng = seeded(m)
    F = rand_poly(rng, m, 3, 16)
    pts = rand_points(rng, m, 2, 16)
    check_values(F, pts, multipoint_eval(F, pts, 128), 128)


def test_inexact_polynomial_is_respected():
    F = ApproxPoly.from_coeffs([1, 1], err_bits=300)
    check_values(F, [DyadicComplex(1, -1)], multipoint_eval(F, [DyadicComplex(1, -1)], 200), 200)


@settings(max_examples=15)
@given(st.integers(min_value=1, max_value=24), st.integers(min_value=1, max_value=24),
       st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=150),
       st.integers(min_value=0, max_value=2 ** 32))
def test_error_bound_holds(nc, npts, gamma, L, seed):
    rng = random.Random(seed)
    F = rand_poly(rng, nc, rng.randrange(0, 8), 12)
    pts = rand_points(rng, npts, gamma, 12)
    check_values(F, pts, multipoint_eval(F, pts, L), L)


def test_subproduct_tree_shapes():
    t = SubproductTree([0])
    assert t.height == 0 and t.root.is_leaf
    t = build_subproduct_tree([1, -1], 50)
    assert dist1(t.root.poly, [-1, 0, 1]) <= pow2(-50)
    t = SubproductTree(range(5))
    assert t.root.left.degree == 3 and t.root.right.degree == 2
    assert [n.lo for n in t.path(4)] == [0, 3, 4]


def test_subproduct_tree_16_points():
    rng = seeded(16)
    pts = rand_points(rng, 16, 3, 20)
    t = build_subproduct_tree(pts, 100)
    assert dist1(t.root.poly, exact_product(pts)) <= pow2(-100)
    for layer in t.layers:
        for node in layer:
            assert dist1(node.poly, exact_product(pts[node.lo:node.hi])) <= pow2(-100)


def test_remainder_layer_exact_parent():
    rng = seeded(2)
    pts = rand_points(rng, 4, 1, 12)
    gl = ApproxPoly.from_coeffs(exact_product(pts[:2]).c)
    gr = ApproxPoly.from_coeffs(exact_product(pts[2:]).c)
    parent = rand_poly(rng, 4, 1, 12)
    (rl, _), (rr, _) = remainder_layer(parent, gl, gr, 90, gamma=1)
    for r, g in ((rl, gl), (rr, gr)):
        _, R = exact_divmod(ExactRationalPoly.from_approx(parent), ExactRationalPoly.from_approx(g))
        assert r.degree < 2
        assert dist1(r, R) <= pow2(-80)


def test_remainder_layer_leaves_and_budget():
    parent = ApproxPoly.from_coeffs([1, 2, 3])                   # 1 + 2x + 3x^2
    leaf_a = ApproxPoly.from_coeffs([Dyadic(-1, -1), 1])         # x - 1/2
    leaf_b = ApproxPoly.from_coeffs([1, 1])                      # x + 1
    budget = schedule_precisions(3, 2, 1, 40)
    (ra, _), (rb, _) = remainder_layer(parent, leaf_a, leaf_b, budget)
    assert dist1(ra, [Dyadic(11, -2)]) <= pow2(-40)              # value at 1/2
    assert dist1(rb, [2]) <= pow2(-40)                           # value at -1
    # a parent of lower degree passes through untouched
    (rc, term), _ = remainder_layer(ApproxPoly.from_coeffs([7]), parent, parent, 40)
    assert dist1(rc, [7]) == 0 and term == 0


def test_schedule_precisions():
    b = schedule_precisions(256, 64, 8, 1024)
    assert DIV_CONST == 2
    assert b.ell_div == 1024 + 64 + 2 * 256 * 8 + 2 * 256 * 8
    assert b.ell_div == 9280
    assert b.ell_mul > b.ell_div
    # linear in L, and headroom adds straight through
    assert schedule_precisions(256, 64, 8, 2048).ell_div - b.ell_div == 1024
    assert schedule_precisions(256, 64, 8, 1024, headroom=64).ell_div == b.ell_div + 64
    with pytest.raises(ValueError):
        schedule_precisions(0, 1, 1, 1)


def test_point_gamma():
    assert point_gamma([0]) == 1
    assert point_gamma([DyadicComplex(3, 4)]) == 3
    assert point_gamma([DyadicComplex(8, 8)]) == 4


def test_workers_do_not_change_results():
    rng = seeded(8)
    F = rand_poly(rng, 40, 4, 16)
    pts = rand_points(rng, 40, 3, 16)
    base = multipoint_eval(F, pts, 150)
    assert multipoint_eval(F, pts, 150, workers=4) == base


def test_escalation_cap_env(monkeypatch):
    monkeypatch.setenv("POLYEVAL_ESCALATION_CAP", "bogus")
    with pytest.raises(ValueError):
        multipoint_eval(ApproxPoly.from_coeffs([1, 1]), [1], 10)
    monkeypatch.setenv("POLYEVAL_ESCALATION_CAP", "0")
    F = ApproxPoly.from_coeffs([1, 1])
    check_values(F, [1], multipoint_eval(F, [1], 10), 10)


def test_stats_are_filled():
    rng = seeded(9)
    F = rand_poly(rng, 16, 4, 16)
    pts = rand_points(rng, 16, 2, 16)
    st = EvalStats()
    multipoint_eval(F, pts, 64, stats=st)
    assert st.budget is not None and st.budget.L == 64
    assert st.query_depth >= 64
    assert st.escalations == 0
