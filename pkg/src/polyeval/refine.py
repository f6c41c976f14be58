"""Batch real-root refinement with quadratic interval refinement (QIR).

Each interval runs as a generator that yields evaluation requests ``[(x, bits)]``
and receives certified enclosures.  :func:`refine_batch` drives all generators in
lockstep and serves every round of requests with one :func:`multipoint_eval`
call.  All decisions (signs, the secant's subinterval) are made only when the
enclosures settle them, so the outcome does not depend on how requests were
batched.

One QIR step on ``(a, b)`` with state ``N``: locate the secant root ``x_S`` of the
chord through ``(a, F(a))`` and ``(b, F(b))``; if the ``N``-th subinterval holding
``x_S`` shows a sign change it becomes the new interval and ``N`` squares,
otherwise bisect and set ``N = max(4, ceil(sqrt(N)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .dyadic import Dyadic, DyadicComplex
from .errors import EvaluationUndecidable, InsufficientInputPrecision, PrecisionExhausted
from .mpeval import multipoint_eval
from .poly import EXACT, ApproxPoly

__all__ = [
    "IsolatingInterval",
    "RefineJob",
    "RefineStats",
    "certified_sign",
    "qir_step",
    "refine_batch",
    "refine_sequential",
]

N0 = 4
# number of candidate offsets tried on each side of an undecided point
MAX_CANDIDATES = 8


@dataclass(frozen=True)
class IsolatingInterval:
    """``(a, b)`` with a certified sign change; ``exact`` marks a zero-width hit ``[x, x]``."""

    a: Dyadic
    b: Dyadic
    sign_a: int = 0
    sign_b: int = 0
    N: int = N0
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", Dyadic.coerce(self.a))
        object.__setattr__(self, "b", Dyadic.coerce(self.b))
        if self.exact:
            if self.a != self.b:
                raise ValueError("an exact hit has a == b")
        elif not self.a < self.b:
            raise ValueError("interval needs a < b")

    @property
    def width(self) -> Dyadic:
        return self.b - self.a

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.a.to_fraction() <= x <= self.b.to_fraction()

    def __str__(self):
        s = f"{self.a.to_literal()} {self.b.to_literal()}"
        return s + " exact" if self.exact else s


@dataclass
class RefineJob:
    F: ApproxPoly
    intervals: Sequence[IsolatingInterval]
    L: int


@dataclass
class RefineStats:
    rounds: int = 0
    evaluations: int = 0
    steps: list = field(default_factory=list)       # QIR iterations per interval
    successes: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    max_bits: int = 0


def _ceil_sqrt_pow2(N: int) -> int:
    return 1 << ((N.bit_length() - 1 + 1) // 2)


def _as_real(F) -> ApproxPoly:
    if not isinstance(F, ApproxPoly):
        F = ApproxPoly.from_coeffs(F)
    if not F.is_real():
        raise ValueError("root refinement needs a real polynomial")
    return F


def _sign_of(y: DyadicComplex, bits: int) -> int:
    """Sign of the real value within ``2**-bits`` of ``y``, 0 when 0 is not excluded."""
    r = y.re
    if r.mantissa == 0:
        return 0
    if abs(r) > Dyadic(1, -bits):
        return 1 if r.mantissa > 0 else -1
    return 0


def certified_sign(F, x, start_bits: int, cap_bits: int) -> int:
    """``+1``/``-1`` when ``F(x)`` is provably non-zero, else ``0`` (undecided at the cap)."""
    if cap_bits < start_bits:
        raise ValueError("cap_bits must be at least start_bits")
    F = _as_real(F)
    x = Dyadic.coerce(x)
    p = max(1, start_bits)
    while True:
        y = multipoint_eval(F, [x], p)[0]
        s = _sign_of(y, p)
        if s or p >= cap_bits:
            return s
        p = min(2 * p, cap_bits)


class _Context:
    def __init__(self, F: ApproxPoly, L: int):
        self.F = F
        self.L = L
        self.n = max(F.degree, 1)
        self.tau = max(1, F.norm_log2())
        self.exact = F.err_bits == EXACT

    def cap(self, a: Dyadic, b: Dyadic, h: Dyadic) -> int:
        """Precision cap: target plus ``8n`` plus the coefficient and point-size terms."""
        m = max(abs(a), abs(b))
        gam = max(1, m.ceil_log2()) if m.mantissa else 1
        depth = max(self.L, -h.ceil_log2() if h.mantissa else self.L)
        return depth + 8 + 8 * self.n + self.tau + self.n * gam

    def is_root(self, x: Dyadic) -> bool:
        return self.exact and self.F.eval_exact(x).re.mantissa == 0


def _signs(xs, start: int, cap: int):
    """Generator: certified signs of F at ``xs``; 0 for points undecided at ``cap``."""
    out = {}
    todo = list(dict.fromkeys(xs))
    p = min(max(32, start), cap)
    while todo:
        res = yield [(x, p) for x in todo]
        nxt = []
        for x in todo:
            y, bits = res[x]
            s = _sign_of(y, bits)
            if s or p >= cap:
                out[x] = s
            else:
                nxt.append(x)
        todo = nxt
        p = min(2 * p, cap)
    return out


def _secant_index(ya, ea, yb, eb, N):
    """Subinterval of the secant root, or ``(None, nearest boundary)`` if unsettled."""
    fa_lo, fa_hi = abs(ya) - ea, abs(ya) + ea
    fb_lo, fb_hi = abs(yb) - eb, abs(yb) + eb
    # t = |F(a)| / (|F(a)| + |F(b)|) is the relative position of x_S in (a, b)
    t_lo = fa_lo / (fa_hi + fb_hi)
    t_hi = fa_hi / (fa_lo + fb_lo) if fa_lo + fb_lo > 0 else Fraction(1)
    k_lo = min(N - 1, math.floor(N * t_lo))
    k_hi = min(N - 1, math.floor(N * min(t_hi, Fraction(1))))
    if k_lo == k_hi:
        return k_lo, None
    mid = (t_lo + min(t_hi, Fraction(1))) / 2
    return None, min(N - 1, round(N * mid))


def _interval_gen(iv: IsolatingInterval, ctx: _Context, index: int, max_steps=None, stats=None):
    """Generator refining one interval until its width is at most ``2**-L``."""
    target = Dyadic(1, -ctx.L)
    a, b = iv.a, iv.b
    cap0 = ctx.cap(a, b, b - a)
    sa, sb = iv.sign_a, iv.sign_b
    encl = {}

    def remember(res):
        for x, (y, bits) in res.items():
            old = encl.get(x)
            if old is None or bits > old[1]:
                encl[x] = (y, bits)

    if not sa or not sb:
        signs = yield from _track(_signs([a, b], 32, cap0), remember)
        sa, sb = sa or signs[a], sb or signs[b]
    if not sa or not sb or sa == sb:
        raise EvaluationUndecidable(f"interval {index} has no certified sign change", index=index)
    iv = replace(iv, sign_a=sa, sign_b=sb)
    steps = succ = fail = 0

    while not iv.exact and iv.width > target and (max_steps is None or steps < max_steps):
        a, b, N = iv.a, iv.b, iv.N
        w = b - a
        h = w.scale(-(N.bit_length() - 1))
        cap = ctx.cap(a, b, h)

        # secant position, settled to within one subinterval
        k = None
        extra = (N.bit_length() - 1) + 8
        while True:
            have = [encl.get(a), encl.get(b)]
            if all(have):
                (ya, pa), (yb, pb) = have
                k, fallback = _secant_index(ya.re.to_fraction(), Fraction(1, 1 << pa),
                                            yb.re.to_fraction(), Fraction(1, 1 << pb), N)
                if k is not None:
                    break
                if min(pa, pb) >= cap:
                    k = fallback
                    break
            mags = [abs(e[0].re) for e in have if e and e[0].re.mantissa]
            base = max((-m.ceil_log2() for m in mags), default=0)
            p = min(cap, max(32, base + extra, min((e[1] for e in have if e), default=0) + 1))
            res = yield [(a, p), (b, p)]
            remember(res)
            extra *= 2

        c = a + Dyadic(h.mantissa * k, h.exponent)
        d = c + h
        mid = a + w.scale(-1)
        ask = [x for x in (c, d) if x != a and x != b] + [mid]
        start = -h.ceil_log2() + 16
        res_signs = yield from _track(_signs(ask, start, cap), remember)
        sign = {a: iv.sign_a, b: iv.sign_b}
        sign.update(res_signs)
        steps += 1

        zero = next((x for x in (c, d) if sign[x] == 0), None)
        if zero is None:
            if sign[c] != sign[d]:
                iv = IsolatingInterval(c, d, sign[c], sign[d], N * N)
                succ += 1
                continue
            fail += 1
            newN = max(N0, _ceil_sqrt_pow2(N))
            if sign[mid]:
                if sign[mid] == sign[a]:
                    iv = IsolatingInterval(mid, b, sign[mid], sign[b], newN)
                else:
                    iv = IsolatingInterval(a, mid, sign[a], sign[mid], newN)
                continue
            zero, N_after = mid, newN
        else:
            N_after = N * N
        # undecided point: exact hit, or shift to nearby candidates
        if ctx.is_root(zero):
            iv = IsolatingInterval(zero, zero, 0, 0, N_after, exact=True)
            break
        step = h.scale(-(N.bit_length() - 1))
        cnt = min(MAX_CANDIDATES, max(1, N // 2))
        cands = []
        for j in range(1, cnt + 1):
            off = Dyadic(step.mantissa * j, step.exponent)
            lo, hi = zero - off, zero + off
            if a < lo and hi < b:
                cands.append((lo, hi))
        cs = yield from _track(_signs([x for pair in cands for x in pair], start, cap), remember)
        for lo, hi in cands:
            if cs[lo] and cs[hi] and cs[lo] != cs[hi]:
                iv = IsolatingInterval(lo, hi, cs[lo], cs[hi], N_after)
                succ += 1
                break
        else:
            raise EvaluationUndecidable(
                f"interval {index}: sign undecided near {zero.to_literal()} for all candidates",
                index=index)
    if stats is not None:
        stats.steps[index] = steps
        stats.successes[index] = succ
        stats.failures[index] = fail
    return iv


def _track(gen, remember):
    """Relay a sub-generator's requests, recording every enclosure it receives."""
    try:
        req = next(gen)
        while True:
            res = yield req
            remember(res)
            req = gen.send(res)
    except StopIteration as stop:
        return stop.value


def _drive(F: ApproxPoly, gens: dict, stats: RefineStats, workers=None):
    """Run interval generators in lockstep; one multipoint evaluation per round."""
    results = {}
    pending = {}
    for i, g in gens.items():
        try:
            pending[i] = next(g)
        except StopIteration as stop:
            results[i] = stop.value
    while pending:
        pts, bits = [], 0
        for req in pending.values():
            for x, p in req:
                pts.append(x)
                bits = max(bits, p)
        uniq = list(dict.fromkeys(pts))
        try:
            vals = multipoint_eval(F, uniq, bits, workers=workers)
        except InsufficientInputPrecision as exc:
            raise PrecisionExhausted(f"polynomial too coarse for refinement: {exc}") from exc
        stats.rounds += 1
        stats.evaluations += len(uniq)
        stats.max_bits = max(stats.max_bits, bits)
        table = {x: (y, bits) for x, y in zip(uniq, vals)}
        nxt = {}
        for i, req in pending.items():
            try:
                nxt[i] = gens[i].send({x: table[x] for x, _ in req})
            except StopIteration as stop:
                results[i] = stop.value
        pending = nxt
    return results


def refine_batch(job: RefineJob, workers=None, stats: RefineStats | None = None,
                 max_steps: int | None = None):
    """Refine every interval of ``job`` to width ``<= 2**-L``; evaluations are batched.

    Raises :class:`EvaluationUndecidable` with the offending interval's index.
    """
    F = _as_real(job.F)
    ivs = [iv if isinstance(iv, IsolatingInterval) else IsolatingInterval(*iv)
           for iv in job.intervals]
    stats = stats if stats is not None else RefineStats()
    k = len(ivs)
    stats.steps, stats.successes, stats.failures = [0] * k, [0] * k, [0] * k
    ctx = _Context(F, job.L)
    gens = {i: _interval_gen(iv, ctx, i, max_steps, stats) for i, iv in enumerate(ivs)}
    out = _drive(F, gens, stats, workers)
    return [out[i] for i in range(k)]


def refine_sequential(F, intervals, L: int, stats: RefineStats | None = None):
    """Refine each interval on its own (reference for the batched driver)."""
    F = _as_real(F)
    out = []
    agg = stats if stats is not None else RefineStats()
    for i, iv in enumerate(intervals):
        st = RefineStats()
        try:
            out.extend(refine_batch(RefineJob(F, [iv], L), stats=st))
        except EvaluationUndecidable as exc:
            raise EvaluationUndecidable(str(exc), index=i) from exc
        agg.rounds += st.rounds
        agg.evaluations += st.evaluations
        agg.steps += st.steps
        agg.successes += st.successes
        agg.failures += st.failures
    return out


def qir_step(F, I: IsolatingInterval, L: int = 0) -> IsolatingInterval:
    """A single QIR step on ``I`` (no step if ``I`` is already exact)."""
    F = _as_real(F)
    ctx = _Context(F, L)
    st = RefineStats(steps=[0], successes=[0], failures=[0])
    # the width target must not stop the step early
    ctx.L = max(L, -I.width.ceil_log2() + 1) if not I.exact else L
    gen = _interval_gen(I, ctx, 0, max_steps=1, stats=st)
    return _drive(F, {0: gen}, st)[0]
