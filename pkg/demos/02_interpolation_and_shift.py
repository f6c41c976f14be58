"""
Interpolation and Taylor shift
==============================

Go from values back to coefficients, then move the expansion point.
"""

from fractions import Fraction

from polyeval import InterpProblem, interpolate, multipoint_eval, taylor_shift
from polyeval.dyadic import DyadicComplex
from polyeval.oracle import exact_taylor_shift
from polyeval.poly import ApproxPoly

# F = 1 - 2x + x^3 / 4
F = ApproxPoly.from_coeffs([1, -2, 0, Fraction(1, 4)])
pts = [0, 1, -1, DyadicComplex(0, 1)]

# values are produced on demand, at whatever precision the interpolation asks for
problem = InterpProblem(pts, lambda bits: multipoint_eval(F, pts, bits))
G = interpolate(problem, 100)
print("recovered coefficients:")
for c in G.coeffs:
    print("  ", c.to_literal())

#
# F(m + x) for a complex m, compared with exact repeated synthetic division
m = DyadicComplex.from_literal("0x3p-1-0x1p0i")
S = taylor_shift(F, m, 120)
exact = exact_taylor_shift(F, m)
for k, (c, (re, im)) in enumerate(zip(S.coeffs, exact.c)):
    err = abs(c.re.to_fraction() - re) + abs(c.im.to_fraction() - im)
    print(f"x^{k}: {c.to_literal():>40}   err {float(err):.1e}")

#
# shifting by 0 hands the polynomial back untouched
assert taylor_shift(F, 0, 120).coeffs == F.coeffs
