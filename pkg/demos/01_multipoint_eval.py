"""
Certified multipoint evaluation
===============================

Evaluate a random polynomial at many points and compare with a slow,
high-precision Horner loop.  Every value comes with the promise
|y - F(x)| <= 2**-L.
"""

import math
import random
import time

from polyeval import EvalStats, multipoint_eval
from polyeval.bench import random_points, random_poly
from polyeval.oracle import horner_eval_hp

rng = random.Random(1)
n, tau, gamma, L = 128, 16, 4, 256

# coefficients below 2**tau in 1-norm, points with |re| + |im| <= 2**gamma
F = random_poly(n, tau, rng)
xs = random_points(n, gamma, rng, frac_bits=32)

t0 = time.perf_counter()
st = EvalStats()
ys = multipoint_eval(F, xs, L, stats=st)
print(f"tree evaluation of {n} points: {time.perf_counter() - t0:.2f}s")

#
# how far are we from the truth?  (Horner at 4L is within 2**-4L)
worst = -math.inf
for x, y in zip(xs, ys):
    h = horner_eval_hp(F, x, 4 * L)
    d = abs((y.re - h.re).to_fraction()) + abs((y.im - h.im).to_fraction())
    if d:
        worst = max(worst, math.log2(d))
print(f"largest error: 2**{worst:.1f}   (target 2**-{L})")

#
# the a-priori plan and what was actually asked of the inputs
print("division precision ell_div:", st.budget.ell_div)
print("deepest input query:", st.query_depth, "bits")
print("escalations:", st.escalations)
