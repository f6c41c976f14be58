"""Certified Lagrange interpolation through the subproduct tree.

``F(x) = sum_i mu_i * prod_{j != i} (x - x_j)`` with ``mu_i = v_i / lambda_i`` and
``lambda_i = g'(x_i)`` for ``g = prod (x - x_j)``.  The weighted sum is assembled
bottom-up: a node's partial interpolant is ``g_right * F_left + g_left * F_right``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .config import escalation_cap
from .dyadic import Dyadic, DyadicComplex, ceil_log2_int
from .errors import CoincidentPoints, InsufficientInputPrecision, PrecisionExhausted
from .mpeval import SubproductTree, _fill_tree, multipoint_eval, point_gamma
from .mul import approx_mul
from .poly import EXACT, ApproxPoly

__all__ = [
    "InterpProblem",
    "lagrange_denominators",
    "combine_layer",
    "interpolate",
]


def _cl2(n: int) -> int:
    return ceil_log2_int(n) if n > 0 else 0


@dataclass
class InterpProblem:
    """Nodes and values.  ``values`` is either a sequence (with a common error exponent
    ``value_err_bits``, ``inf`` for exact values) or a callable ``bits -> sequence``
    returning values within ``2**-bits``."""

    points: Sequence
    values: object
    value_err_bits: float = EXACT

    def __post_init__(self):
        self.points = [DyadicComplex.coerce(p) for p in self.points]
        if not callable(self.values):
            self.values = [DyadicComplex.coerce(v) for v in self.values]
            if len(self.values) != len(self.points):
                raise ValueError("points and values differ in length")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def gamma(self) -> int:
        return point_gamma(self.points)

    def query(self, bits: int):
        """Values together with their error exponent, at no less than ``bits`` bits."""
        if callable(self.values):
            try:
                raw = self.values(bits)
            except InsufficientInputPrecision as exc:
                # the data itself is too coarse; more headroom cannot help
                exc.from_values = True
                raise
            vals = [DyadicComplex.coerce(v) for v in raw]
            if len(vals) != self.n:
                raise ValueError("value oracle returned the wrong number of values")
            return vals, bits
        if self.value_err_bits < bits:
            exc = InsufficientInputPrecision(
                f"values carry {self.value_err_bits} bits, interpolation needs {bits}",
                required=bits, available=self.value_err_bits)
            exc.from_values = True
            raise exc
        return self.values, self.value_err_bits


def _tree_root(points, bits: int) -> SubproductTree:
    """Subproduct tree with root certified to ``bits`` (chain demands below it)."""
    from .mpeval import _chain_need
    tree = SubproductTree(points)
    for layer in tree.layers:
        for node in layer:
            node.need_bits = bits if node.parent is None else _chain_need(node.parent)
    _fill_tree(tree)
    return tree


def lagrange_denominators(tree: SubproductTree, ell: int, workers=None, stats=None):
    """``lambda_i = g'(x_i)`` to within ``2**-ell`` by evaluating the derivative of the root.

    If the root is not precise enough for the demanded accuracy the tree is rebuilt
    from its exact leaf points.
    """
    points = list(tree.leaf_points)
    if len(points) == 1:
        return [DyadicComplex(1, 0)]
    n = len(points)
    for _ in range(escalation_cap() + 2):
        root = tree.root.poly
        if root is None:
            # what the evaluation of g' will ask for, in original coordinates
            bits = ell + 5 + _cl2(tree.height + 2) + tree.point_bound * (n - 1) + _cl2(n) + 2
            tree = _tree_root(points, bits)
            continue
        try:
            return multipoint_eval(root.derivative(), points, ell, workers=workers, stats=stats)
        except InsufficientInputPrecision as exc:
            tree = _tree_root(points, exc.required + _cl2(n) + 2)
    raise PrecisionExhausted("could not reach the demanded precision for the denominators")


def combine_layer(mu_left: ApproxPoly, mu_right: ApproxPoly, g_left: ApproxPoly,
                  g_right: ApproxPoly, ell: int) -> ApproxPoly:
    """``g_right * F_left + g_left * F_right`` to ``ell`` bits.

    Each partial interpolant gets multiplied by the subproduct of the other half's
    points, which is what the Lagrange terms expand to.
    """
    a = approx_mul(mu_left, g_right, ell + 1)
    b = approx_mul(mu_right, g_left, ell + 1)
    # both products have length deg g_left + deg g_right
    return a.add(b)


def _lower_abs(z: DyadicComplex, err: Dyadic) -> Dyadic:
    """Certified lower bound on ``|w|`` for any ``w`` within ``err`` of ``z`` (may be <= 0)."""
    # |z| >= max(|re|, |im|) >= (|re| + |im|) / 2
    return z.abs_bound().scale(-1) - err


def _log2_ceil(x: Dyadic) -> int:
    return x.ceil_log2() if x.mantissa > 0 else -(1 << 30)


def _divide(v: DyadicComplex, lam: DyadicComplex, bits: int) -> DyadicComplex:
    """``v / lam`` rounded to ``bits`` fractional bits (exact rational arithmetic)."""
    num = v * lam.conjugate()
    den = lam.abs_squared().to_fraction()
    return DyadicComplex(Dyadic.from_fraction(num.re.to_fraction() / den, bits),
                         Dyadic.from_fraction(num.im.to_fraction() / den, bits))


def interpolate(problem: InterpProblem, L: int, workers=None, stats: dict | None = None) -> ApproxPoly:
    """``F~`` with ``||F~ - F|| <= 2**-L`` for the interpolant ``F`` of degree ``< n``.

    Raises :class:`CoincidentPoints` when a denominator cannot be separated from 0.
    """
    pts = problem.points
    n = len(pts)
    if n == 0:
        raise ValueError("need at least one node")
    if len(set(pts)) != n:
        raise CoincidentPoints("interpolation nodes are not distinct")
    gamma = problem.gamma
    cap = escalation_cap()
    if stats is None:
        stats = {}
    stats.setdefault("escalations", 0)

    # first pass: magnitudes of the denominators and of the values
    probe_bits = 32
    lam_lb = None
    tree = SubproductTree(pts)
    for _ in range(cap + 1):
        lam = lagrange_denominators(tree, probe_bits, workers=workers)
        eps = Dyadic(1, -probe_bits)
        lbs = [_lower_abs(z, eps) for z in lam]
        if all(lb.mantissa > 0 for lb in lbs):
            lam_lb = lbs
            break
        probe_bits *= 2
    if lam_lb is None:
        raise CoincidentPoints("a Lagrange denominator could not be separated from zero")
    Lam = max(0, max(-lb.ceil_log2() + 1 for lb in lam_lb))
    vals0, verr0 = problem.query(16)
    V = max(1, max((_log2_ceil(v.abs_bound()) for v in vals0), default=1) + 1)
    mu_log = V + Lam + 1
    stats["V"], stats["Lambda"] = V, Lam

    headroom = 0
    for attempt in range(cap + 1):
        try:
            return _interpolate(problem, L, gamma, Lam, V, mu_log, headroom, workers, stats)
        except (InsufficientInputPrecision, _Retry) as exc:
            if getattr(exc, "from_values", False):
                raise
            stats["escalations"] += 1
            headroom = 32 << attempt
    raise PrecisionExhausted(f"interpolation not certified after {cap} doublings")


class _Retry(Exception):
    pass


def _interpolate(problem, L, gamma, Lam, V, mu_log, headroom, workers, stats):
    from .mpeval import _chain_need
    pts = problem.points
    n = len(pts)
    tree = SubproductTree(pts)

    # top-down demand on partial interpolants (F) and node polynomials (g)
    need_F = {}
    need_g = {}
    target = L + 1 + headroom
    need_F[id(tree.root)] = target
    for layer in tree.layers:
        for node in layer:
            if node.is_leaf:
                continue
            ell_v = need_F[id(node)] + 1
            lft, rgt = node.left, node.right
            for part, other in ((lft, rgt), (rgt, lft)):
                bF = _cl2(part.degree) + mu_log + (part.degree - 1) * (gamma + 1) + 2
                bg = other.degree * (gamma + 1) + 1
                lam = _cl2(max(part.degree - 1, other.degree) + 1)
                demand = ell_v + max(bF, bg) + 2 * lam + 3
                need_F[id(part)] = demand
                need_g[id(other)] = max(need_g.get(id(other), 0), demand)
    for layer in tree.layers:
        for node in layer:
            need = need_g.get(id(node))
            if node.parent is not None and node.parent.need_bits is not None:
                chain = _chain_need(node.parent)
                need = chain if need is None else max(need, chain)
            node.need_bits = need
    _fill_tree(tree, workers)

    # weights mu_i = v_i / lambda_i at the leaf demands
    mu_bits = max(need_F[id(lf)] for lf in tree.leaves) if n > 1 else target
    lam_bits = mu_bits + V + 2 * Lam + 6
    val_bits = mu_bits + Lam + 4
    vals, verr = problem.query(val_bits)
    lam = lagrange_denominators(tree, lam_bits, workers=workers) if n > 1 else [DyadicComplex(1, 0)]
    eps_l = Dyadic(1, -lam_bits) if n > 1 else Dyadic(0)
    eps_v = Dyadic(0) if verr == EXACT else Dyadic(1, -verr)
    partial = {}
    for lf, v, z in zip(tree.leaves, vals, lam):
        lb = _lower_abs(z, eps_l)
        if lb.mantissa <= 0:
            raise CoincidentPoints(f"denominator at node {lf.lo} is not separated from zero")
        p = need_F[id(lf)] if n > 1 else target
        mu = _divide(v, z, p + 1)
        # |v~/l~ - v/l| <= |v~| |l - l~| / (|l| |l~|) + |v~ - v| / |l|, plus rounding
        vb = v.abs_bound() + eps_v
        lt = z.abs_bound().scale(-1)
        bound = (vb * eps_l).to_fraction() / (lb.to_fraction() * lt.to_fraction()) \
            + eps_v.to_fraction() / lb.to_fraction() + Fraction(1, 1 << (p + 1))
        if bound > Fraction(1, 1 << p):
            raise _Retry()
        poly = ApproxPoly.from_coeffs([mu])
        poly.err_bits = p
        partial[id(lf)] = poly
    stats["value_bits"] = val_bits
    stats["lambda_bits"] = lam_bits

    for layer in reversed(tree.layers):
        for node in layer:
            if node.is_leaf:
                continue
            partial[id(node)] = combine_layer(partial[id(node.left)], partial[id(node.right)],
                                              node.left.poly, node.right.poly,
                                              need_F[id(node)])
    out = partial[id(tree.root)].padded(n)
    if out.err_bits < L:
        raise _Retry()
    return out
