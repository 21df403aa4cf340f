"""Semi-flat charts on the base with walls, wall-crossing, and gluing.

Chart maps are substitution tables of sympy rational functions.  The fiber
coordinate ``w`` is global and fixed by every map.  The singular points of
the base only matter through their order, so they are kept as labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import sympy as sp

from . import toric
from .errors import InternalInconsistency, InvalidParameter

u, v, w = sp.symbols("u v w")


@dataclass(frozen=True)
class BaseData:
    n: int
    singular_points: tuple[str, ...]
    walls: tuple[str, ...]


def base_data(n: int) -> BaseData:
    if n < 1:
        raise InvalidParameter("n must be at least 1")
    pts = tuple(f"s_{i}" for i in range(n + 1))
    return BaseData(n, pts, tuple(f"s = {p}" for p in pts))


@dataclass(frozen=True)
class ChartMap:
    """``source`` coordinates expressed in terms of ``target`` coordinates."""

    source: tuple[sp.Symbol, ...]
    target: tuple[sp.Symbol, ...]
    images: tuple[sp.Expr, ...]

    def __call__(self, expr: sp.Expr) -> sp.Expr:
        return sp.together(expr.subs(dict(zip(self.source, self.images)), simultaneous=True))

    def then(self, other: "ChartMap") -> "ChartMap":
        """Substitute ``other`` into this map (pull back along ``other``)."""
        if tuple(self.target) != tuple(other.source):
            raise InvalidParameter("chart labels do not match")
        return ChartMap(self.source, other.target, tuple(other(e) for e in self.images))

    def inverse(self) -> "ChartMap":
        shared = set(self.source) & set(self.target)
        eqs = [sp.Eq(s, e) for s, e in zip(self.source, self.images) if s not in shared]
        unknowns = [t for t in self.target if t not in shared]
        sol = sp.solve(eqs, unknowns, dict=True)
        if len(sol) != 1:
            raise InternalInconsistency(f"map is not birational: {sol}")
        images = tuple(t if t in shared else sp.together(sol[0][t]) for t in self.target)
        return ChartMap(self.target, self.source, images)

    def equals(self, other: "ChartMap") -> bool:
        if self.source != other.source or self.target != other.target:
            return False
        return all(sp.cancel(a - b) == 0 for a, b in zip(self.images, other.images))


def _side(side: str) -> str:
    if side not in ("plus", "minus"):
        raise InvalidParameter(f"side must be 'plus' or 'minus', got {side!r}")
    return side


def uncorrected_transition(side: str) -> ChartMap:
    img = 1 / v if _side(side) == "plus" else w / v
    return ChartMap((u, w), (v, w), (img, w))


def corrected_transition(side: str) -> ChartMap:
    img = (1 + w) / v if _side(side) == "plus" else w * (1 + 1 / w) / v
    return ChartMap((u, w), (v, w), (img, w))


def monodromy(corrections: bool, times: int = 1) -> ChartMap:
    """The loop around one singular point as a self-map of the ``(u, w)`` chart.

    Crossing the lower half-wall writes ``u`` in terms of ``v``; coming back
    across the upper half-wall uses the inverse of the upper transition.
    """
    make = corrected_transition if corrections else uncorrected_transition
    once = make("minus").then(make("plus").inverse())
    loop = ChartMap((u, w), (u, w), (u, w))
    for _ in range(times):
        loop = loop.then(once)
    return loop


def monodromy_matrix() -> sp.Matrix:
    """Exponent matrix of the uncorrected monodromy (rows: images of u and w)."""
    loop = monodromy(False)
    rows = []
    for img in loop.images:
        powers = sp.Poly(sp.numer(img), u, w).monoms()
        den = sp.Poly(sp.denom(img), u, w)
        if len(powers) != 1 or den.total_degree() != 0:
            raise InternalInconsistency(f"uncorrected monodromy is not monomial: {img}")
        rows.append(list(powers[0]))
    return sp.Matrix(rows)


# Glued cover: chart i has coordinates (u_i, v_{i+1}) with u_i v_{i+1} = 1 + w.

def chart_symbols(i: int) -> tuple[sp.Symbol, sp.Symbol]:
    return sp.Symbol(f"u_{i}"), sp.Symbol(f"v_{i + 1}")


def glued_transition(i: int, j: int) -> ChartMap:
    """Coordinates of chart ``j`` written in chart ``i``."""
    ui, vi1 = chart_symbols(i)
    h = ui * vi1
    return ChartMap(chart_symbols(j), (ui, vi1),
                    (ui * h ** (i - j), h ** (j - i + 1) / ui))


@dataclass
class GluedCover:
    n: int
    relations: list[sp.Eq] = field(default_factory=list)
    transitions: dict[tuple[int, int], ChartMap] = field(default_factory=dict)
    cocycle_checked: int = 0


def glued_cover_relations(n: int) -> GluedCover:
    if n < 1:
        raise InvalidParameter("n must be at least 1")
    cover = GluedCover(n)
    for i in range(n):
        ui, vi1 = chart_symbols(i)
        cover.relations.append(sp.Eq(ui * vi1, 1 + w))
    for i in range(1, n):
        ui, vi1 = chart_symbols(i)
        uprev, vi = chart_symbols(i - 1)
        cover.relations.append(sp.Eq(ui * vi1, uprev * vi))
    for i in range(n + 1):
        for j in range(n + 1):
            cover.transitions[i, j] = glued_transition(i, j)
    for i in range(n + 1):
        ui, vi1 = chart_symbols(i)
        # w is global: it reads the same from every chart
        for j in range(n + 1):
            uj, vj1 = cover.transitions[i, j].images
            if sp.cancel(uj * vj1 - ui * vi1) != 0:
                raise InternalInconsistency(f"w differs between charts {i} and {j}")
    for i, j, k in permutations(range(n + 1), 3):
        direct = cover.transitions[i, k]
        composed = cover.transitions[j, k].then(cover.transitions[i, j])
        if not composed.equals(direct):
            raise InternalInconsistency(f"cocycle fails on charts {(i, j, k)}")
        cover.cocycle_checked += 1
    return cover


@dataclass(frozen=True)
class ChartMatch:
    ok: bool
    witness: dict[str, str]
    failures: tuple[str, ...] = ()


def toric_transition(fan: toric.FanAn, i: int, j: int) -> tuple[sp.Expr, sp.Expr]:
    """Coordinates ``(X_j, Y_j)`` of toric chart ``j`` as monomials in ``(X_i, Y_i)``."""
    X, Y = sp.symbols(f"X_{i} Y_{i}")
    out = []
    for m in toric.chart_exponents(fan, j):
        e, f = toric.express_in_chart(m, fan, i)
        out.append(X ** e * Y ** f)
    return tuple(out)


def match_resolution_charts(n: int) -> ChartMatch:
    """Find a dictionary identifying the glued cover with the toric charts.

    Toric chart ``i`` has coordinates ``X_i, Y_i`` dual to the rays of its
    cone, and ``h = X_i Y_i`` is the character ``(0, 1)``.  The glued chart
    variables are tried against both assignments of ``X_i, Y_i``.
    """
    fan = toric.build_fan(n)
    for c in range(n + 1):
        X, Y = sp.symbols(f"X_{c} Y_{c}")
        hx, hy = toric.express_in_chart((0, 1), fan, c)
        if X ** hx * Y ** hy != X * Y:
            raise InternalInconsistency("h is not the product of the chart coordinates")
    failures = []
    for u_is_y in (True, False):
        bad = []
        for i in range(n + 1):
            X, Y = sp.symbols(f"X_{i} Y_{i}")
            ui, vi1 = chart_symbols(i)
            to_toric = {ui: Y, vi1: X} if u_is_y else {ui: X, vi1: Y}
            for j in range(n + 1):
                Xj, Yj = toric_transition(fan, i, j)
                uj, vj1 = (sp.cancel(e.subs(to_toric, simultaneous=True))
                           for e in glued_transition(i, j).images)
                want = (Yj, Xj) if u_is_y else (Xj, Yj)
                if sp.cancel(uj - want[0]) != 0 or sp.cancel(vj1 - want[1]) != 0:
                    bad.append(f"charts {i}->{j}: glued ({uj}, {vj1}) vs toric {want}")
        if not bad:
            witness = {"u_i": "Y_i = chi^(1, 1-i)" if u_is_y else "X_i = chi^(-1, i)",
                       "v_(i+1)": "X_i = chi^(-1, i)" if u_is_y else "Y_i = chi^(1, 1-i)",
                       "w": "h - 1 with h = chi^(0, 1)"}
            return ChartMatch(True, witness)
        failures.extend(bad)
    return ChartMatch(False, {}, tuple(failures))
