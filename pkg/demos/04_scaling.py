"""
How the cost grows
==================

Wall time of tree evaluation against the quadratic Horner baseline, and
against L.  Small sizes so this finishes in about a minute; use the
``polyeval bench`` command for bigger runs.
"""

import sys

from polyeval.bench import median_seconds, run_bench, write_csv

rows = []
for n in (32, 64, 128, 256):
    for mode in ("eval", "horner"):
        r = run_bench(mode, n, 1024, tau=8, gamma=8, repeat=1)
        rows += r
        print(f"{mode:>6} n={n:<4} {median_seconds(r):7.3f}s")

#
# doubling L at fixed n
for L in (512, 1024, 2048, 4096):
    r = run_bench("eval", 128, L, repeat=1)
    rows += r
    print(f"  eval n=128 L={L:<5} {median_seconds(r):7.3f}s")

write_csv(rows, sys.stdout)
