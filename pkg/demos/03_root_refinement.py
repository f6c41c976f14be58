"""
Refining isolating intervals
============================

Quadratic interval refinement on a few real roots at once.  Each round of
sign queries across all intervals is served by one multipoint evaluation.
"""

from fractions import Fraction

from polyeval import IsolatingInterval, RefineJob, RefineStats, refine_batch
from polyeval.poly import ApproxPoly

# (x^2 - 2)(x^2 - 3): roots near +-1.414 and +-1.732
F = ApproxPoly.from_coeffs([6, 0, -5, 0, 1])
intervals = [
    IsolatingInterval(-2, Fraction(-3, 2)),
    IsolatingInterval(Fraction(-3, 2), -1),
    IsolatingInterval(1, Fraction(3, 2)),
    IsolatingInterval(Fraction(3, 2), 2),
]

for L in (10, 50, 200):
    st = RefineStats()
    out = refine_batch(RefineJob(F, intervals, L), stats=st)
    print(f"L={L}: {st.rounds} rounds, QIR steps per interval {st.steps}")
    for iv in out:
        print("   ", float(iv.a.to_fraction()), float(iv.width.to_fraction()))

#
# an exact dyadic root ends the search with a zero-width interval
lin = ApproxPoly.from_coeffs([Fraction(-5, 4), 1])
print(refine_batch(RefineJob(lin, [IsolatingInterval(0, 2)], 100))[0])
