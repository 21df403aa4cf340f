"""Thimbles of ``W = z + 1/z^n`` as graphs on the cylinder, and their ring.

The cylinder is ``[-R, R] x (R / Z)`` with ``r`` a log-radius coordinate and
the angle measured in turns.  A thimble is drawn in the universal cover as a
piecewise-linear graph with breakpoints at ``r = -R, 0, R``: it starts at its
critical point on ``r = 0`` and runs out to both ends.  One wrap adds a full
turn at the outer end and subtracts ``1/n`` of a turn at the inner end.

Intersection points are crossings of one graph with integer translates of
another, holomorphic triangles are regions bounded by three graph arcs, and
the marked points of the zero fiber sit on ``r = 0``.  All data are exact
rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import sympy as sp

from .errors import InvalidParameter, PerturbationError

R = Fraction(2)
BREAKS = (-R, Fraction(0), R)


@dataclass(frozen=True, order=True)
class Monomial:
    p: int
    q: int

    def degree(self, n: int) -> int:
        return self.p + n * self.q

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.p + other.p, self.q + other.q)

    def __str__(self) -> str:
        parts = []
        for var, e in (("x", self.p), ("y", self.q)):
            if e == 1:
                parts.append(var)
            elif e:
                parts.append(f"{var}^{e}")
        return "*".join(parts) or "1"


def ord_(m: Monomial) -> int:
    """Largest ``d`` with ``(xy)^d`` dividing the monomial."""
    return min(m.p, m.q)


def hom_degree(i0: int, i1: int, k: int, n: int) -> int:
    return i1 - i0 + k * (n + 1)


def monomial_basis(degree: int, n: int) -> list[Monomial]:
    """Monomials of weighted degree ``degree`` (``deg x = 1, deg y = n``), by increasing ``q``."""
    if degree < 0:
        return []
    return [Monomial(degree - n * q, q) for q in range(degree // n + 1)]


@dataclass(frozen=True)
class GradedHomPiece:
    i0: int
    i1: int
    k: int
    n: int

    @property
    def degree(self) -> int:
        return hom_degree(self.i0, self.i1, self.k, self.n)

    @property
    def basis(self) -> list[Monomial]:
        return monomial_basis(self.degree, self.n)

    @property
    def dimension(self) -> int:
        d = self.degree
        return d // self.n + 1 if d >= 0 else 0


@dataclass(frozen=True)
class CriticalData:
    n: int
    critical_angles: tuple[Fraction, ...]
    zero_angles: tuple[Fraction, ...]
    critical_modulus: sp.Expr
    zero_modulus: sp.Expr

    def critical_point(self, i: int) -> sp.Expr:
        return self.critical_modulus * sp.exp(2 * sp.pi * sp.I * sp.Rational(i, self.n + 1))

    def critical_value(self, i: int) -> sp.Expr:
        z = self.critical_point(i)
        return sp.simplify(z + 1 / z ** self.n)


def critical_data(n: int) -> CriticalData:
    if n < 1:
        raise InvalidParameter("n must be at least 1")
    crit = tuple(Fraction(i, n + 1) for i in range(n + 1))
    zeros = tuple(Fraction(2 * j + 1, 2 * (n + 1)) for j in range(n + 1))
    for j in range(n + 1):
        nxt = crit[j + 1] if j < n else Fraction(1)
        if not crit[j] < zeros[j] < nxt:
            raise AssertionError("critical and zero angles do not interleave")
    return CriticalData(n, crit, zeros, sp.root(n, n + 1), sp.Integer(1))


def epsilon_bound(n: int, k_max: int) -> Fraction:
    return Fraction(1, 4 * (n + 1) * (k_max + 1))


@dataclass(frozen=True)
class ThimbleLift:
    """Graph of the ``k``-fold wrap of thimble ``i``, perturbed at ``level``.

    Perturbations push the inner end down by ``level * eps``, the outer end
    up by the same amount and the centre up by ``level**2 * eps``.  Lifts
    earlier in a composition sit at higher levels; the quadratic centre term
    keeps crossings of equal thimbles at distinct abscissas for each pair of
    levels.
    """

    i: int
    k: int
    n: int
    eps: Fraction
    level: int = 0

    @property
    def anchors(self) -> tuple[Fraction, Fraction, Fraction]:
        off = self.level * self.eps
        return (Fraction(self.i - self.k, self.n) - off,
                Fraction(self.i, self.n + 1) + self.level * off,
                Fraction(self.k) + off)

    def __call__(self, r: Fraction) -> Fraction:
        left, mid, right = self.anchors
        if r <= 0:
            return left + (mid - left) * (r + R) / R
        return mid + (right - mid) * r / R


def thimble_lift(i: int, k: int, n: int, eps: Fraction, level: int = 0,
                 k_max: int | None = None) -> ThimbleLift:
    if n < 1 or not 0 <= i <= n or k < 0:
        raise InvalidParameter(f"bad thimble indices i={i}, k={k}, n={n}")
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidParameter("epsilon must be positive")
    if eps * max(level, 1) ** 2 >= epsilon_bound(n, max(k, k_max or 0)):
        raise PerturbationError(f"epsilon {eps} too large for n={n}, k<={max(k, k_max or 0)}")
    return ThimbleLift(i, k, n, eps, level)


@dataclass(frozen=True)
class IntersectionPoint:
    r: Fraction
    theta: Fraction      # value of the first lift, in turns
    translate: int       # the second lift is shifted by this many turns
    q: int               # label: translates crossed from the right end


def _difference(A: ThimbleLift, B: ThimbleLift) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(a - b for a, b in zip(A.anchors, B.anchors))


def _roots(A: ThimbleLift, B: ThimbleLift, m: int) -> list[Fraction]:
    """Abscissas where ``A = B + m``; each half of the interval is linear."""
    h = [x - m for x in _difference(A, B)]
    roots = []
    for (r0, h0), (r1, h1) in ((( -R, h[0]), (Fraction(0), h[1])), ((Fraction(0), h[1]), (R, h[2]))):
        if h0 == 0 and h1 == 0:
            raise PerturbationError(f"lifts {A} and {B} coincide on [{r0}, {r1}]")
        if h0 == 0:
            root = r0
        elif h1 == 0:
            root = r1
        elif (h0 > 0) != (h1 > 0):
            root = r0 + (r1 - r0) * h0 / (h0 - h1)
        else:
            continue
        if abs(root) == R:
            raise PerturbationError(f"lifts {A} and {B} meet at an end of the cylinder")
        if root not in roots:
            roots.append(root)
    return roots


def intersections(A: ThimbleLift, B: ThimbleLift) -> list[IntersectionPoint]:
    """Crossings of ``A`` with translates of ``B``, ordered from right to left."""
    if A.n != B.n:
        raise InvalidParameter("lifts belong to different n")
    if A.k < B.k:
        raise InvalidParameter("the first lift must be wrapped at least as often as the second")
    if A.level == B.level:
        raise PerturbationError("lifts at the same perturbation level are not transverse")
    h = _difference(A, B)
    lo, hi = math.floor(min(h)), math.ceil(max(h))
    pts = []
    for m in range(lo, hi + 1):
        for r in _roots(A, B, m):
            pts.append(IntersectionPoint(r, A(r), m, (A.k - B.k) - m))
    pts.sort(key=lambda p: -p.r)
    return pts


def label_generators(A: ThimbleLift, B: ThimbleLift) -> dict[IntersectionPoint, Monomial]:
    """Assign monomials: the label ``q`` counts translates of ``B`` passed from the right."""
    pts = intersections(A, B)
    D = hom_degree(A.i, B.i, A.k - B.k, A.n)
    basis = monomial_basis(D, A.n)
    labels = {}
    for p in pts:
        if not 0 <= p.q < len(basis):
            raise PerturbationError(f"label q={p.q} outside the monomial basis for {A}, {B}")
        labels[p] = Monomial(D - A.n * p.q, p.q)
    if sorted(m.q for m in labels.values()) != list(range(len(basis))):
        raise PerturbationError(f"intersection labels are not bijective for {A}, {B}")
    return labels


@dataclass(frozen=True)
class Arc:
    lift: ThimbleLift
    shift: int
    r_from: Fraction
    r_to: Fraction

    def value(self, r: Fraction) -> Fraction:
        return self.lift(r) + self.shift

    def polyline(self) -> list[tuple[Fraction, Fraction]]:
        lo, hi = sorted((self.r_from, self.r_to))
        rs = [self.r_from] + [b for b in BREAKS if lo < b < hi] + [self.r_to]
        if self.r_from > self.r_to:
            rs = [self.r_from] + sorted((b for b in BREAKS if lo < b < hi), reverse=True) + [self.r_to]
        return [(r, self.value(r)) for r in rs]


@dataclass(frozen=True)
class Triangle:
    """Region with corners ``x1 -> x2 -> out`` bounded by arcs of the three lifts."""

    corners: tuple[tuple[Fraction, Fraction], ...]
    arcs: tuple[Arc, Arc, Arc]
    output: IntersectionPoint
    coefficient: int
    signed_area: Fraction


def _signed_area(arcs: Iterable[Arc]) -> Fraction:
    pts = []
    for arc in arcs:
        pts.extend(arc.polyline()[:-1])
    total = Fraction(0)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        total += x0 * y1 - x1 * y0
    return total / 2


# Boundary of a contributing triangle runs counterclockwise in the (r, theta) chart.
ORIENTATION = 1


def triangle_count(A: ThimbleLift, B: ThimbleLift, C: ThimbleLift,
                   pA: IntersectionPoint, pB: IntersectionPoint) -> list[Triangle]:
    """Triangles with corners ``pA`` in A and B, ``pB`` in B and C, and an output in A and C.

    Work in the universal cover with ``A`` fixed: ``B`` is shifted by
    ``pA.translate`` and ``C`` by the sum of both translates.  Each pair of
    graphs meets at most once per translate, so the three arcs bound an
    embedded disk; it counts when the boundary runs with the right orientation.
    """
    shift_b = pA.translate
    shift_c = pA.translate + pB.translate
    outs = [p for p in intersections(A, C) if p.translate == shift_c]
    if not outs:
        return []
    out = outs[0]
    rB = pB.r
    arcs = (Arc(B, shift_b, pA.r, rB), Arc(C, shift_c, rB, out.r), Arc(A, 0, out.r, pA.r))
    for arc, (r, expect) in zip(arcs, ((pA.r, pA.theta), (rB, None), (out.r, out.theta))):
        if expect is not None and arc.value(r) != expect:
            raise AssertionError("triangle corners are inconsistent")
    if len({pA.r, rB, out.r}) < 3:
        raise PerturbationError("triangle corners share an abscissa")
    area = _signed_area(arcs)
    if area == 0:
        raise PerturbationError("degenerate triangle")
    if (area > 0) - (area < 0) != ORIENTATION:
        return []
    corners = ((pA.r, pA.theta), (rB, arcs[0].value(rB)), (out.r, out.theta))
    return [Triangle(corners, arcs, out, 1, area)]


def s0_crossings(tri: Triangle, n: int) -> int:
    """Marked points of the zero fiber strictly inside the triangle."""
    rs = [c[0] for c in tri.corners]
    if not min(rs) < 0 < max(rs):
        return 0
    values = []
    for arc in tri.arcs:
        lo, hi = sorted((arc.r_from, arc.r_to))
        if lo <= 0 <= hi:
            values.append(arc.value(Fraction(0)))
    bottom, top = min(values), max(values)
    # marks at (2j + 1) / (2(n + 1)) turns, i.e. t / (2(n + 1)) for odd t
    scale = 2 * (n + 1)
    count = 0
    for t in range(math.floor(bottom * scale), math.ceil(top * scale) + 1):
        if t % 2 == 0:
            continue
        mark = Fraction(t, scale)
        if mark in (bottom, top):
            raise PerturbationError("a marked point lies on the triangle boundary")
        if bottom < mark < top:
            count += 1
    return count


def dual_cycle_pairing(i: int, j: int, n: int) -> int:
    """1 when the critical angle ``i`` lies on the arc between zeros ``j - 1`` and ``j``."""
    if not (0 <= i <= n and 1 <= j <= n):
        raise InvalidParameter("indices out of range")
    crit = Fraction(i, n + 1)
    lo, hi = Fraction(2 * j - 1, 2 * (n + 1)), Fraction(2 * j + 1, 2 * (n + 1))
    return int(lo < crit < hi)


# Rings

@dataclass(frozen=True, order=True)
class Gen:
    """Basis element of the hom from the ``k``-fold wrap of ``i0`` to ``i1``.

    ``index`` counts intersection points from the right end on the geometric
    side and is the exponent of ``y`` on the algebraic side.
    """

    i0: int
    i1: int
    k: int
    index: int


Table = dict[tuple[Gen, Gen], dict[Gen, int]]


def default_epsilon(n: int, w_max: int) -> Fraction:
    return epsilon_bound(n, w_max) / 8


@lru_cache(maxsize=None)
def _pair_points(i0: int, k0: int, lvl0: int, i1: int, k1: int, lvl1: int,
                 n: int, eps: Fraction) -> tuple[IntersectionPoint, ...]:
    A = ThimbleLift(i0, k0, n, eps, lvl0)
    B = ThimbleLift(i1, k1, n, eps, lvl1)
    return tuple(intersections(A, B))


def geometric_generators(i0: int, i1: int, k: int, n: int, eps: Fraction) -> list[Gen]:
    pts = _pair_points(i0, k, 1, i1, 0, 0, n, eps)
    return [Gen(i0, i1, k, idx) for idx in range(len(pts))]


@dataclass
class ProductRecord:
    left: Gen
    right: Gen
    output: Gen | None
    s0: int | None


def geometric_product(g2: Gen, g1: Gen, n: int, eps: Fraction) -> ProductRecord:
    """``m2(g2, sigma^{k2}(g1))`` by counting triangles."""
    if g1.i1 != g2.i0:
        raise InvalidParameter("generators are not composable")
    k1, k2 = g1.k, g2.k
    A = ThimbleLift(g1.i0, k1 + k2, n, eps, 2)
    B = ThimbleLift(g2.i0, k2, n, eps, 1)
    C = ThimbleLift(g2.i1, 0, n, eps, 0)
    ab = _pair_points(g1.i0, k1 + k2, 2, g2.i0, k2, 1, n, eps)
    bc = _pair_points(g2.i0, k2, 1, g2.i1, 0, 0, n, eps)
    pA, pB = ab[g1.index], bc[g2.index]
    tris = triangle_count(A, B, C, pA, pB)
    if not tris:
        return ProductRecord(g2, g1, None, None)
    if len(tris) != 1:
        raise AssertionError("more than one triangle with given inputs")
    tri = tris[0]
    ac = _pair_points(g1.i0, k1 + k2, 2, g2.i1, 0, 0, n, eps)
    idx = ac.index(tri.output)
    return ProductRecord(g2, g1, Gen(g1.i0, g2.i1, k1 + k2, idx), s0_crossings(tri, n))


def _composable_pairs(n: int, w_max: int, eps: Fraction | None) -> Iterable[tuple[Gen, Gen]]:
    for i0 in range(n + 1):
        for i1 in range(n + 1):
            for i2 in range(n + 1):
                for k1 in range(w_max + 1):
                    for k2 in range(w_max + 1 - k1):
                        if eps is None:
                            left = range(GradedHomPiece(i0, i1, k1, n).dimension)
                            right = range(GradedHomPiece(i1, i2, k2, n).dimension)
                        else:
                            left = range(len(geometric_generators(i0, i1, k1, n, eps)))
                            right = range(len(geometric_generators(i1, i2, k2, n, eps)))
                        for a in left:
                            for b in right:
                                yield Gen(i1, i2, k2, b), Gen(i0, i1, k1, a)


def ring_A_structure(n: int, w_max: int, eps: Fraction | None = None) -> tuple[Table, list[ProductRecord]]:
    """Structure constants of the thimble ring from triangle counts."""
    eps = default_epsilon(n, w_max) if eps is None else Fraction(eps)
    if 4 * eps >= epsilon_bound(n, w_max):
        raise PerturbationError("epsilon too large for the three-level schedule")
    table: Table = {}
    records = []
    for g2, g1 in _composable_pairs(n, w_max, eps):
        rec = geometric_product(g2, g1, n, eps)
        records.append(rec)
        table[g2, g1] = {rec.output: 1} if rec.output is not None else {}
    return table, records


def ring_B_structure(n: int, w_max: int) -> Table:
    """Structure constants of the graded pieces under polynomial multiplication."""
    table: Table = {}
    for g2, g1 in _composable_pairs(n, w_max, None):
        m = gen_monomial(g2, n) * gen_monomial(g1, n)
        table[g2, g1] = {Gen(g1.i0, g2.i1, g1.k + g2.k, m.q): 1}
    return table


def gen_monomial(g: Gen, n: int) -> Monomial:
    return Monomial(hom_degree(g.i0, g.i1, g.k, n) - n * g.index, g.index)


def multiply_by_s(g: Gen, n: int) -> Gen:
    return Gen(g.i0, g.i1, g.k + 1, g.index + 1)


def geometric_continuation(g: Gen, n: int, eps: Fraction) -> Gen | None:
    """Follow an intersection point while the first lift is wrapped once more.

    Wrapping shears the first graph without moving the translate of the
    second graph that it crosses, so the point keeps its translate.
    """
    before = _pair_points(g.i0, g.k, 1, g.i1, 0, 0, n, eps)[g.index]
    after = _pair_points(g.i0, g.k + 1, 1, g.i1, 0, 0, n, eps)
    for idx, p in enumerate(after):
        if p.translate == before.translate:
            return Gen(g.i0, g.i1, g.k + 1, idx)
    return None


def check_associativity(table: Table) -> list[tuple[Gen, Gen, Gen]]:
    """Composable triples where the two bracketings differ."""
    def mul(x: dict[Gen, int], y: dict[Gen, int]) -> dict[Gen, int] | None:
        out: dict[Gen, int] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                if (a, b) not in table:
                    return None
                for c, cc in table[a, b].items():
                    out[c] = out.get(c, 0) + ca * cb * cc
        return {k: v for k, v in out.items() if v}

    by_target: dict[int, list[Gen]] = {}
    gens = sorted({g for pair in table for g in pair})
    for g in gens:
        by_target.setdefault(g.i0, []).append(g)
    bad = []
    for g1 in gens:
        for g2 in by_target.get(g1.i1, []):
            for g3 in by_target.get(g2.i1, []):
                left = mul({g3: 1}, {g2: 1})
                right = mul({g2: 1}, {g1: 1})
                if left is None or right is None:
                    continue
                a = mul(left, {g1: 1})
                b = mul({g3: 1}, right)
                if a is None or b is None:
                    continue
                if a != b:
                    bad.append((g3, g2, g1))
    return bad


def identity_gen(i: int) -> Gen:
    return Gen(i, i, 0, 0)


@dataclass
class RingIsomReport:
    n: int
    w_max: int
    eps: Fraction
    count_mismatches: list[tuple[int, int, int, int, int]]
    product_mismatches: list[tuple[Gen, Gen, Gen | None, Gen]]
    continuation_mismatches: list[tuple[Gen, Gen | None]]
    unit_failures: list[Gen]
    degree_mismatches: list[tuple[Gen, Gen, Gen, int, int]]
    min_matches: int
    max_matches: int
    max_cases: int
    stable_under_halving: bool
    products_checked: int

    @property
    def ok(self) -> bool:
        return not (self.count_mismatches or self.product_mismatches
                    or self.continuation_mismatches or self.unit_failures
                    or self.degree_mismatches) and self.stable_under_halving


def count_law_mismatches(n: int, k_max: int, eps: Fraction) -> list[tuple[int, int, int, int, int]]:
    bad = []
    for k in range(k_max + 1):
        for i0 in range(n + 1):
            for i1 in range(n + 1):
                got = len(_pair_points(i0, k, 1, i1, 0, 0, n, eps))
                want = GradedHomPiece(i0, i1, k, n).dimension
                if got != want:
                    bad.append((i0, i1, k, got, want))
    return bad


def ord_of_residues_max(g2: Gen, g1: Gen, n: int) -> int | None:
    """The alternative ``max`` prediction for the marked-point count.

    After stripping ``(xy)^ord`` one input is a pure power of ``x`` with
    exponent ``a`` and the other a pure power of ``y`` with exponent ``b``;
    the alternative predicts ``max(a, b)`` in that case.
    """
    m1, m2 = gen_monomial(g1, n), gen_monomial(g2, n)
    r1 = Monomial(m1.p - ord_(m1), m1.q - ord_(m1))
    r2 = Monomial(m2.p - ord_(m2), m2.q - ord_(m2))
    if r1.p and r2.q:
        return max(r1.p, r2.q)
    if r1.q and r2.p:
        return max(r1.q, r2.p)
    return None


def verify_ring_isom(n: int, w_max: int, eps: Fraction | None = None) -> RingIsomReport:
    eps = default_epsilon(n, w_max) if eps is None else Fraction(eps)
    counts = count_law_mismatches(n, w_max, eps)
    table, records = ring_A_structure(n, w_max, eps)
    btable = ring_B_structure(n, w_max)
    prod_bad = []
    for key, val in table.items():
        want = btable.get(key)
        if val != want:
            prod_bad.append((key[0], key[1], next(iter(val), None), next(iter(want))))
    cont_bad = []
    for k in range(w_max):
        for i0 in range(n + 1):
            for i1 in range(n + 1):
                for g in geometric_generators(i0, i1, k, n, eps):
                    img = geometric_continuation(g, n, eps)
                    if img != multiply_by_s(g, n):
                        cont_bad.append((g, img))
    units = []
    for key, val in table.items():
        g2, g1 = key
        if g2 == identity_gen(g2.i0) and val != {g1: 1}:
            units.append(g1)
        if g1 == identity_gen(g1.i0) and val != {g2: 1}:
            units.append(g2)
    deg_bad = []
    min_ok = max_ok = max_cases = 0
    for rec in records:
        if rec.output is None:
            continue
        want = (ord_(gen_monomial(rec.output, n)) - ord_(gen_monomial(rec.left, n))
                - ord_(gen_monomial(rec.right, n)))
        if rec.s0 != want:
            deg_bad.append((rec.left, rec.right, rec.output, rec.s0, want))
        else:
            min_ok += 1
        alt = ord_of_residues_max(rec.left, rec.right, n)
        if alt is not None:
            max_cases += 1
            if alt == rec.s0:
                max_ok += 1
    half, _ = ring_A_structure(n, w_max, eps / 2)
    stable = half == table and count_law_mismatches(n, w_max, eps / 2) == counts
    return RingIsomReport(n, w_max, eps, counts, prod_bad, cont_bad, units, deg_bad,
                          min_ok, max_ok, max_cases, stable, len(table))
