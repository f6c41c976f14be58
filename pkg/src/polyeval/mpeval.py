"""Certified multipoint evaluation via subproduct and remainder trees.

Pipeline for ``F`` and points ``x_1..x_m``:

1. Build the subproduct tree: leaves ``x - x_t``, inner nodes the certified
   products of their children.  Per-node precisions are planned top-down from
   a-priori norm bounds so that every division below can be certified.
2. Descend: each node's remainder is its parent's remainder modulo the node
   polynomial.  Leaves hold the values.
3. Certify each value a posteriori.  Since ``g_v(x_t) = 0`` for the exact node
   polynomial, the error a node contributes at ``x_t`` is bounded by
   ``||Q|| M^(deg Q + d) ||g~ - g|| + ||H|| M^(deg H) + ||E|| M^(d-1)``
   (quotient times divisor error, high residual, remainder rounding), with
   ``M = 2**Gamma_v``.  Summing along the leaf's path plus the input rounding of F
   gives a rigorous bound, checked against ``2**-(L+1)``.  On failure the whole
   computation reruns with extra headroom (capped doubling).

The evaluation itself runs on ``F(2**Gamma y)`` at the points ``x_t / 2**Gamma``,
which all lie in the unit square, so ``M = 1`` there and the point bound only
enters through the norm of the dilated polynomial.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .config import escalation_cap
from .div import divrem_kernel
from .dyadic import Dyadic, DyadicComplex, ceil_log2_int, round_shift
from .errors import InsufficientInputPrecision, PrecisionExhausted
from .mul import approx_mul
from .poly import EXACT, ApproxPoly

__all__ = [
    "DIV_CONST",
    "PrecisionBudget",
    "SubproductTree",
    "TreeNode",
    "RemainderTree",
    "EvalStats",
    "schedule_precisions",
    "build_subproduct_tree",
    "remainder_layer",
    "multipoint_eval",
    "point_gamma",
    "poly_tau",
]

# constant of the n*log(n) headroom term in the division precision
DIV_CONST = 2
# first escalation adds this many bits of headroom; later ones double it
HEADROOM_STEP = 64


def _cl2(n: int) -> int:
    return ceil_log2_int(n) if n > 0 else 0


def _abs_log2(z: DyadicComplex):
    """``ceil(log2(|re| + |im|))`` or ``None`` for zero."""
    b = z.abs_bound()
    return None if b.mantissa == 0 else b.ceil_log2()


def point_gamma(points) -> int:
    """Smallest ``Gamma >= 1`` with ``|re| + |im| <= 2**Gamma`` for every point."""
    g = 1
    for p in points:
        e = _abs_log2(DyadicComplex.coerce(p))
        if e is not None and e > g:
            g = e
    return g


def poly_tau(F: ApproxPoly) -> int:
    """Smallest ``tau >= 1`` with ``norm_bound(F) <= 2**tau``."""
    return max(1, F.norm_log2())


@dataclass
class PrecisionBudget:
    """Headline working precisions for one evaluation problem.

    ``ell_div = L + tau + 2*n*Gamma + DIV_CONST * n * max(1, ceil(log2 n)) + headroom``;
    ``ell_mul`` adds, for every layer of a balanced tree, the input demand of one
    certified multiplication of two degree-``2**i`` node polynomials.
    """

    n: int
    tau: int
    gamma: int
    L: int
    ell_div: int
    ell_mul: int
    headroom: int = 0


def schedule_precisions(n: int, tau: int, gamma: int, L: int, headroom: int = 0) -> PrecisionBudget:
    if tau < 1 or gamma < 1 or L < 0 or n < 1:
        raise ValueError("need n, tau, Gamma >= 1 and L >= 0")
    ell_div = L + tau + 2 * n * gamma + DIV_CONST * n * max(1, _cl2(n)) + headroom
    ell_mul = ell_div
    d = 1
    while d < n:
        ell_mul += d * (gamma + 1) + 1 + 2 * _cl2(d + 1) + 3
        d *= 2
    return PrecisionBudget(n, tau, gamma, L, ell_div, ell_mul, headroom)


class TreeNode:
    """Node ``g_v = prod (x - x_t)`` over the leaf range ``lo <= t < hi``."""

    __slots__ = ("lo", "hi", "left", "right", "depth", "gamma", "poly", "need_bits",
                 "parent")

    def __init__(self, lo, hi, depth, parent=None):
        self.lo, self.hi, self.depth, self.parent = lo, hi, depth, parent
        self.left = self.right = None
        self.gamma = 0
        self.poly = None
        self.need_bits = None

    @property
    def degree(self) -> int:
        return self.hi - self.lo

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __repr__(self):
        return f"TreeNode([{self.lo}, {self.hi}), depth={self.depth})"


class SubproductTree:
    """Nearly balanced subproduct tree; the left child of a node gets ``ceil(m/2)`` leaves."""

    def __init__(self, points):
        self.leaf_points = tuple(DyadicComplex.coerce(p) for p in points)
        if not self.leaf_points:
            raise ValueError("need at least one point")
        self.point_bound = point_gamma(self.leaf_points)
        self.nodes = []
        self.leaves = [None] * len(self.leaf_points)
        self.root = self._make(0, len(self.leaf_points), 0, None)
        self.height = max(n.depth for n in self.nodes)

    def _make(self, lo, hi, depth, parent):
        node = TreeNode(lo, hi, depth, parent)
        self.nodes.append(node)
        if hi - lo == 1:
            e = _abs_log2(self.leaf_points[lo])
            node.gamma = max(0, e) if e is not None else 0
            self.leaves[lo] = node
        else:
            mid = lo + (hi - lo + 1) // 2
            node.left = self._make(lo, mid, depth + 1, node)
            node.right = self._make(mid, hi, depth + 1, node)
            node.gamma = max(node.left.gamma, node.right.gamma)
        return node

    @property
    def layers(self):
        """Nodes grouped by depth, root first."""
        out = [[] for _ in range(self.height + 1)]
        for n in self.nodes:
            out[n.depth].append(n)
        return out

    def path(self, t: int):
        """Nodes from the root down to leaf ``t``."""
        node, out = self.leaves[t], []
        while node is not None:
            out.append(node)
            node = node.parent
        return out[::-1]

    def __len__(self):
        return len(self.nodes)


def _map(fn, items, workers):
    if workers and workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _leaf_poly(x: DyadicComplex, bits: int) -> ApproxPoly:
    """``x - x~`` with ``x~`` rounded to ``bits`` fractional bits (leading 1 exact)."""
    xr = x.round(bits)
    dev = (x - xr).abs_bound()
    p = ApproxPoly.from_coeffs([-xr, DyadicComplex(1, 0)])
    p.err_bits = EXACT if dev.mantissa == 0 else -dev.ceil_log2()
    return p


def _fill_tree(tree: SubproductTree, workers=None):
    """Compute node polynomials bottom-up using each node's ``need_bits``."""
    for leaf in tree.leaves:
        if leaf.need_bits is not None:
            leaf.poly = _leaf_poly(tree.leaf_points[leaf.lo], leaf.need_bits)
    for layer in reversed(tree.layers):
        todo = [n for n in layer if not n.is_leaf and n.need_bits is not None]

        def work(node):
            return approx_mul(node.left.poly, node.right.poly, node.need_bits)

        for node, poly in zip(todo, _map(work, todo, workers)):
            node.poly = poly


def _chain_need(node: TreeNode) -> int:
    """Input demand a node's children must meet for the certified product."""
    left, right = node.left, node.right
    b = max(left.degree * (left.gamma + 1), right.degree * (right.gamma + 1)) + 1
    return node.need_bits + b + 2 * _cl2(left.degree + 1) + 3


def build_subproduct_tree(points, ell: int, workers=None) -> SubproductTree:
    """Subproduct tree whose every node is certified to at least ``ell`` bits."""
    tree = SubproductTree(points)
    for layer in tree.layers:
        for node in layer:
            need = ell
            if node.parent is not None:
                need = max(need, _chain_need(node.parent))
            node.need_bits = need
    _fill_tree(tree, workers)
    return tree


@dataclass
class _NodePlan:
    deg_in: int          # degree bound of the incoming (parent) remainder
    t_in: int            # a-priori log2 norm bound of the incoming remainder
    divides: bool
    m: int = 0           # quotient degree bound
    rem_bits: int = 0    # fractional bits kept for the node's remainder
    high_bits: int = 0   # required -log2 of ||H|| M^deg_in
    t_out: int = 0       # a-priori log2 norm bound of the node's remainder


def _plan(tree: SubproductTree, deg_F: int, tau: int, L: int, headroom: int):
    """Top-down a-priori plan.  Returns ``(e, plans)`` and sets ``need_bits`` on nodes."""
    K = _cl2(tree.height + 2)
    e = L + 3 + K + headroom
    plans = {}
    for layer in tree.layers:
        for node in layer:
            if node.parent is None:
                deg_in, t_in = deg_F, tau
            else:
                pp = plans[id(node.parent)]
                deg_in = min(pp.deg_in, node.parent.degree - 1) if pp.divides else pp.deg_in
                t_in = pp.t_out
            d, gam = node.degree, node.gamma
            divides = deg_in >= d
            plan = _NodePlan(deg_in, t_in, divides)
            need = None
            if divides:
                m = deg_in - d
                log_q = t_in + d + m + gam * m + 1
                plan.m = m
                plan.t_out = max(t_in, log_q + d * (gam + 1)) + 1
                plan.rem_bits = e + _cl2(d) + gam * (d - 1)
                plan.high_bits = e + gam * deg_in
                need = e + log_q + gam * (m + d)
            else:
                plan.t_out = t_in
            if node.parent is not None and node.parent.need_bits is not None:
                chain = _chain_need(node.parent)
                need = chain if need is None else max(need, chain)
            node.need_bits = need
            plans[id(node)] = plan
    return e, plans


@dataclass
class EvalStats:
    """Instrumentation of one :func:`multipoint_eval` call."""

    budget: PrecisionBudget = None
    escalations: int = 0
    kernel_retries: int = 0
    query_bits_poly: int = 0
    query_bits_points: int = 0
    max_tree_bits: int = 0
    max_error_log2: int = 0
    divisions: int = 0

    @property
    def query_depth(self) -> int:
        return max(self.query_bits_poly, self.query_bits_points)


@dataclass
class RemainderTree:
    """Remainders per node (by node id) and per-node certified error terms."""

    tree: SubproductTree
    remainders: dict = field(default_factory=dict)
    terms: dict = field(default_factory=dict)


def _pow2(k: int) -> Dyadic:
    return Dyadic(1, k)


def _eps(bits) -> Dyadic:
    return Dyadic(0) if bits == EXACT else Dyadic(1, -bits)


def _divide_node(r_in: ApproxPoly, node: TreeNode, plan: _NodePlan, stats: EvalStats | None,
                 cap: int):
    """Certified remainder of ``r_in`` modulo the node polynomial plus its error term."""
    g = node.poly
    d, gam, m = node.degree, node.gamma, plan.m
    deg_in = r_in.degree
    M_in = gam * max(deg_in, 0)
    t_act = max(0, r_in.norm_log2())
    t_g = max(0, g.norm_log2())
    q_bits = plan.high_bits + t_g + _cl2(m + 1) + 3
    inv_bits = q_bits + t_act + t_g + 2 * _cl2(m + 1) + 8
    # the plan's high_bits already include the M**deg_in factor of the parent degree bound
    limit = _pow2(-(plan.high_bits - gam * plan.deg_in))
    extra = 0
    for attempt in range(cap + 1):
        kr = divrem_kernel(r_in, g, q_bits + extra, inv_bits + extra)
        high_term = kr.high.norm_bound.scale(M_in)
        if high_term <= limit:
            break
        # the residual scales like 2**-extra: jump straight past the observed deficit
        deficit = high_term.ceil_log2() - limit.ceil_log2()
        extra += deficit + (16 << attempt)
        if stats is not None:
            stats.kernel_retries += 1
    else:
        raise PrecisionExhausted("division kernel did not reach its residual target")
    low = kr.low
    k = -plan.rem_bits - low.exp
    if k > 0:
        re = [round_shift(a, k) for a in low.re]
        im = [round_shift(b, k) for b in low.im]
        dev = sum(abs(a - (r << k)) for a, r in zip(low.re, re)) + \
            sum(abs(b - (r << k)) for b, r in zip(low.im, im))
        rem = ApproxPoly(re, im, -plan.rem_bits)
        e_norm = Dyadic(dev, low.exp)
    else:
        rem, e_norm = low, Dyadic(0)
    q = kr.q
    q_deg = max(q.degree, 0)
    term = (q.norm_bound.scale(gam * (q_deg + d)) * _eps(g.err_bits)
            + high_term + e_norm.scale(gam * (d - 1)))
    return rem, term


def remainder_layer(parent: ApproxPoly, g_left: ApproxPoly, g_right: ApproxPoly,
                    rem_bits, gamma: int = 1, cap: int | None = None):
    """Remainders of ``parent`` modulo two monic node polynomials.

    Stand-alone form of one descent step.  ``rem_bits`` is the number of fractional
    bits kept in the remainders, or a :class:`PrecisionBudget` (its ``ell_div`` and
    ``gamma`` are used).  Returns ``((r_left, term_left), (r_right, term_right))``
    where ``term`` bounds the error the step adds at any point with
    ``|x| <= 2**gamma`` that is a root of the exact node polynomial.
    """
    if isinstance(rem_bits, PrecisionBudget):
        rem_bits, gamma = rem_bits.ell_div, rem_bits.gamma
    cap = escalation_cap() if cap is None else cap
    out = []
    for g in (g_left, g_right):
        d = g.degree
        node = TreeNode(0, d, 0)
        node.poly, node.gamma = g, gamma
        deg_in = parent.degree
        if deg_in < d:
            out.append((parent.trimmed().padded(max(d, 1)), Dyadic(0)))
            continue
        e = rem_bits - _cl2(d) - gamma * (d - 1)
        plan = _NodePlan(deg_in, max(1, parent.norm_log2()), True, m=deg_in - d,
                         rem_bits=rem_bits, high_bits=e + gamma * deg_in)
        out.append(_divide_node(parent, node, plan, None, cap))
    return tuple(out)


def _descend(F: ApproxPoly, tree: SubproductTree, plans, stats, cap, workers):
    rt = RemainderTree(tree)
    for layer in tree.layers:
        jobs = []
        for node in layer:
            r_in = F if node.parent is None else rt.remainders[id(node.parent)]
            jobs.append((node, r_in))

        def work(job):
            node, r_in = job
            plan = plans[id(node)]
            if not plan.divides or r_in.degree < node.degree:
                return r_in, Dyadic(0)
            return _divide_node(r_in, node, plan, stats, cap)

        for (node, _), (rem, term) in zip(jobs, _map(work, jobs, workers)):
            rt.remainders[id(node)] = rem
            rt.terms[id(node)] = term
            if plans[id(node)].divides:
                stats.divisions += 1
    return rt


def multipoint_eval(F: ApproxPoly, points, L: int, workers=None, stats: EvalStats | None = None,
                    cap: int | None = None):
    """Values ``y_j`` with ``|y_j - F(x_j)| <= 2**-L`` for every point.

    ``F`` may be exact or carry an error exponent; points are exact dyadics.  The
    outputs are rounded to ``L + 2`` fractional bits.
    """
    if not isinstance(F, ApproxPoly):
        F = ApproxPoly.from_coeffs(F)
    points = [DyadicComplex.coerce(p) for p in points]
    if stats is None:
        stats = EvalStats()
    if not points:
        return []
    cap = escalation_cap() if cap is None else cap
    deg_F = F.degree
    if deg_F < 0:
        need = L
        if F.err_bits < need:
            raise InsufficientInputPrecision("polynomial too coarse", required=need,
                                             available=F.err_bits)
        return [DyadicComplex(0, 0) for _ in points]

    tau = poly_tau(F)
    gamma = point_gamma(points)
    n = max(deg_F + 1, len(points))
    headroom = 0
    for attempt in range(cap + 1):
        try:
            return _evaluate(F, points, L, tau, gamma, n, headroom, stats, cap, workers)
        except _CertificationFailed:
            stats.escalations += 1
            headroom = HEADROOM_STEP << attempt
    raise PrecisionExhausted(f"multipoint evaluation not certified after {cap} doublings")


class _CertificationFailed(Exception):
    pass


def _evaluate(F, points, L, tau, gamma, n, headroom, stats, cap, workers):
    budget = schedule_precisions(n, tau, gamma, L, headroom)
    stats.budget = budget
    # work in y = x / 2**gamma so that every point lies in the unit square; then no
    # error term carries a power of the point modulus
    tree = SubproductTree([p.scale(-gamma) for p in points])
    deg_F = F.degree
    Fs = F.trimmed().dilate(gamma)
    tau_s = max(1, Fs.norm_log2())
    e, plans = _plan(tree, deg_F, tau_s, L, headroom)

    need_F = e + 1
    if Fs.err_bits < need_F:
        need = need_F + gamma * deg_F
        raise InsufficientInputPrecision(
            f"polynomial carries {F.err_bits} bits, evaluation needs {need}",
            required=need, available=F.err_bits)
    f_bits = need_F + _cl2(deg_F + 1)
    k = -f_bits - Fs.exp
    if k > 0:
        re = [round_shift(a, k) for a in Fs.re]
        im = [round_shift(b, k) for b in Fs.im]
        dev = sum(abs(a - (r << k)) for a, r in zip(Fs.re, re)) + \
            sum(abs(b - (r << k)) for b, r in zip(Fs.im, im))
        Fr = ApproxPoly(re, im, -f_bits)
        f_dev = Dyadic(dev, Fs.exp)
    else:
        Fr, f_dev = Fs, Dyadic(0)
    root_term = f_dev + _eps(Fs.err_bits)
    # coefficient k of F is effectively read to f_bits + gamma*k bits
    stats.query_bits_poly = f_bits + gamma * deg_F

    _fill_tree(tree, workers)
    stats.query_bits_points = max((lf.need_bits for lf in tree.leaves if lf.need_bits is not None),
                                  default=0) - gamma
    stats.max_tree_bits = max((nd.need_bits for nd in tree.nodes if nd.need_bits is not None),
                              default=0)

    rt = _descend(Fr, tree, plans, stats, cap, workers)

    limit = Dyadic(1, -(L + 1))
    # path sums, accumulated top-down
    acc = {id(tree.root): root_term + rt.terms[id(tree.root)]}
    for layer in tree.layers[1:]:
        for node in layer:
            acc[id(node)] = acc[id(node.parent)] + rt.terms[id(node)]
    worst = max(acc[id(lf)] for lf in tree.leaves)
    stats.max_error_log2 = worst.ceil_log2() if worst.mantissa else -(1 << 30)
    if worst > limit:
        raise _CertificationFailed()

    out = []
    for lf in tree.leaves:
        r = rt.remainders[id(lf)]
        out.append(r.coeff(0).round(L + 2))
    return out
