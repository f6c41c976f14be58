"""Random instances and wall-time measurements for scaling studies."""

from __future__ import annotations

import csv
import random
import statistics
import time
from dataclasses import asdict, dataclass

from .dyadic import Dyadic, DyadicComplex, ceil_log2_int
from .mpeval import EvalStats, multipoint_eval
from .oracle import horner_eval_hp
from .poly import ApproxPoly

__all__ = ["random_poly", "random_points", "BenchRow", "run_bench", "write_csv", "median_seconds"]

FIELDS = ["mode", "n", "prec", "tau", "gamma", "repeat", "seconds", "work_bits",
          "query_bits", "escalations"]


def random_poly(n: int, tau: int, rng: random.Random, frac_bits: int = 16) -> ApproxPoly:
    """``n`` complex coefficients with 1-norm below ``2**tau``."""
    lg = ceil_log2_int(n) if n > 1 else 0
    top = tau + frac_bits - lg - 1
    lim = 1 << max(top, 0)
    exp = -(frac_bits)
    re = [rng.randrange(-lim + 1, lim) for _ in range(n)]
    im = [rng.randrange(-lim + 1, lim) for _ in range(n)]
    return ApproxPoly(re, im, exp)


def random_points(n: int, gamma: int, rng: random.Random, frac_bits: int = 64) -> list:
    """``n`` distinct points with ``|re| + |im| <= 2**gamma``."""
    lim = 1 << (gamma - 1 + frac_bits)
    seen, out = set(), []
    while len(out) < n:
        z = DyadicComplex(Dyadic(rng.randrange(-lim + 1, lim), -frac_bits),
                          Dyadic(rng.randrange(-lim + 1, lim), -frac_bits))
        if z not in seen:
            seen.add(z)
            out.append(z)
    return out


@dataclass
class BenchRow:
    mode: str
    n: int
    prec: int
    tau: int
    gamma: int
    repeat: int
    seconds: float
    work_bits: int
    query_bits: int
    escalations: int


def run_bench(mode: str, n: int, prec: int, tau: int = 8, gamma: int = 8, repeat: int = 1,
              seed: int = 0, workers=None, point_bits: int | None = None) -> list:
    """Time ``repeat`` evaluations of one random instance (``n`` coefficients, ``n`` points).

    ``mode`` is ``eval`` (subproduct/remainder trees) or ``horner`` (the quadratic
    baseline).  Points carry ``point_bits`` fractional bits (default ``prec``).
    """
    if mode not in ("eval", "horner"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    F = random_poly(n, tau, rng)
    pts = random_points(n, gamma, rng, prec if point_bits is None else point_bits)
    rows = []
    for r in range(repeat):
        t0 = time.perf_counter()
        if mode == "eval":
            st = EvalStats()
            multipoint_eval(F, pts, prec, workers=workers, stats=st)
            work, query, esc = st.max_tree_bits, st.query_depth, st.escalations
        else:
            w = prec + (n - 1) * gamma + ceil_log2_int(n) + 2
            for x in pts:
                horner_eval_hp(F, x, prec)
            work, query, esc = w, w, 0
        dt = time.perf_counter() - t0
        rows.append(BenchRow(mode, n, prec, tau, gamma, r, dt, work, query, esc))
    return rows


def median_seconds(rows) -> float:
    return statistics.median(r.seconds for r in rows)


def write_csv(rows, fh):
    w = csv.DictWriter(fh, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        d = asdict(row)
        d["seconds"] = f"{row.seconds:.6f}"
        w.writerow(d)
