"""Toric geometry of the minimal resolution of the A_n surface singularity.

The fan has rays ``v_i = (i - 1, 1)`` for ``i = 0 .. n + 1``; the rays
``v_1 .. v_n`` correspond to the exceptional (-2)-curves ``E_1 .. E_n`` and the
two outer rays to the noncompact boundary divisors.  Everything here is
integer lattice arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from ._linalg import rank
from .errors import InvalidParameter

Vec = tuple[int, int]
Box = tuple[int, int, int, int]  # (m1_lo, m1_hi, m2_lo, m2_hi), inclusive


def det(a: Vec, b: Vec) -> int:
    return a[0] * b[1] - a[1] * b[0]


def pair(m: Vec, v: Vec) -> int:
    return m[0] * v[0] + m[1] * v[1]


@dataclass(frozen=True)
class FanAn:
    n: int
    rays: tuple[Vec, ...]
    cones: tuple[tuple[int, int], ...]

    def cone_rays(self, c: int) -> tuple[Vec, Vec]:
        """Rays of cone ``c`` in counterclockwise order (determinant +1)."""
        a, b = self.cones[c]
        return self.rays[a], self.rays[b]


def build_fan(n: int) -> FanAn:
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    rays = tuple((i - 1, 1) for i in range(n + 2))
    # (v_i, v_{i+1}) has determinant -1, so the counterclockwise order is reversed.
    cones = tuple((i + 1, i) for i in range(n + 1))
    fan = FanAn(n, rays, cones)
    for c in range(n + 1):
        if det(*fan.cone_rays(c)) != 1:
            raise AssertionError("fan is not smooth")
    return fan


@dataclass(frozen=True)
class TorusDivisor:
    coefficients: tuple[int, ...]

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        _same_length(self, other)
        return TorusDivisor(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "TorusDivisor") -> "TorusDivisor":
        _same_length(self, other)
        return TorusDivisor(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "TorusDivisor":
        return TorusDivisor(tuple(-a for a in self.coefficients))


def _same_length(a: TorusDivisor, b: TorusDivisor) -> None:
    if len(a.coefficients) != len(b.coefficients):
        raise InvalidParameter("divisors live on different fans")


@dataclass(frozen=True)
class DivisorClass:
    """Degrees ``(D.E_1, ..., D.E_n)`` on the exceptional curves."""

    degrees: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.degrees)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-d for d in self.degrees))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.degrees, other.degrees)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.degrees, other.degrees)))


def unit_class(n: int, i: int, sign: int = 1) -> DivisorClass:
    """The class with degree ``sign`` on ``E_i`` and 0 elsewhere (``i = 0`` gives 0)."""
    return DivisorClass(tuple(sign if j == i else 0 for j in range(1, n + 1)))


def intersection_number(ray: int, curve: int, fan: FanAn) -> int:
    """``D_ray . E_curve`` for ``1 <= curve <= n``.

    Adjacent rays meet transversally once; the self-intersection ``-2`` comes
    from the relation ``v_{i-1} + v_{i+1} = 2 v_i``.
    """
    if not 1 <= curve <= fan.n:
        raise InvalidParameter(f"curve index {curve} outside 1..{fan.n}")
    if ray == curve:
        r_prev, r, r_next = fan.rays[curve - 1], fan.rays[curve], fan.rays[curve + 1]
        s = r_prev[0] + r_next[0], r_prev[1] + r_next[1]
        # s = -(self-intersection) * v_curve
        if s[0] * r[1] != s[1] * r[0]:
            raise AssertionError("ray relation is not a multiple of the middle ray")
        return -(s[1] // r[1])
    return 1 if abs(ray - curve) == 1 else 0


def divisor_class(D: TorusDivisor, fan: FanAn) -> DivisorClass:
    a = D.coefficients
    if len(a) != fan.n + 2:
        raise InvalidParameter(f"expected {fan.n + 2} coefficients, got {len(a)}")
    return DivisorClass(tuple(
        sum(a[r] * intersection_number(r, c, fan) for r in range(fan.n + 2))
        for c in range(1, fan.n + 1)
    ))


def principal_divisor(m: Vec, fan: FanAn) -> TorusDivisor:
    return TorusDivisor(tuple(pair(m, v) for v in fan.rays))


def principal_character(D: TorusDivisor, fan: FanAn) -> Vec | None:
    """Return ``m`` with ``div(chi^m) = D``, or None if ``D`` is not principal."""
    a = D.coefficients
    if len(a) != fan.n + 2:
        raise InvalidParameter(f"expected {fan.n + 2} coefficients, got {len(a)}")
    # <m, v_0> = -m1 + m2 and <m, v_1> = m2 determine m.
    m = (a[1] - a[0], a[1])
    return m if principal_divisor(m, fan) == D else None


def bundle_with_degrees(d: DivisorClass, fan: FanAn) -> TorusDivisor:
    """A torus divisor supported on ``D_0 .. D_{n-1}`` with class ``d``.

    Back-substitution from the top: with ``a_n = a_{n+1} = 0`` the degree on
    ``E_i`` is ``a_{i-1} - 2 a_i + a_{i+1}``.
    """
    n = fan.n
    if len(d.degrees) != n:
        raise InvalidParameter(f"expected {n} degrees, got {len(d.degrees)}")
    a = [0] * (n + 2)
    for i in range(n, 0, -1):
        a[i - 1] = d.degrees[i - 1] + 2 * a[i] - a[i + 1]
    return TorusDivisor(tuple(a))


def box_points(box: Box) -> Iterable[Vec]:
    m1_lo, m1_hi, m2_lo, m2_hi = box
    return product(range(m1_lo, m1_hi + 1), range(m2_lo, m2_hi + 1))


def sections_in_box(D: TorusDivisor, box: Box, fan: FanAn) -> set[Vec]:
    a = D.coefficients
    if len(a) != fan.n + 2:
        raise InvalidParameter(f"expected {fan.n + 2} coefficients, got {len(a)}")
    return {m for m in box_points(box)
            if all(pair(m, v) >= -ai for v, ai in zip(fan.rays, a))}


def section_m2_range(D: TorusDivisor, fan: FanAn, m2: int) -> tuple[int, int] | None:
    """Inclusive range of ``m1`` such that ``(m1, m2)`` is a section of ``O(D)``."""
    lo, hi = None, None
    for v, ai in zip(fan.rays, D.coefficients):
        # (i-1) m1 >= -ai - m2
        c, rhs = v[0], -ai - m2 * v[1]
        if c == 0:
            if rhs > 0:
                return None
        elif c > 0:
            bound = -((-rhs) // c)
            lo = bound if lo is None else max(lo, bound)
        else:
            bound = (-rhs) // (-c)
            hi = bound if hi is None else min(hi, bound)
    if lo is None or hi is None or lo > hi:
        return None
    return lo, hi


def lowest_section_degree(D: TorusDivisor, fan: FanAn) -> int:
    """Smallest ``m2`` (power of ``h``) carried by a section of ``O(D)``."""
    a = D.coefficients
    n = fan.n
    # From m1 <= m2 + a_0 and n m1 >= -a_{n+1} - m2.
    start = -((a[n + 1] + n * a[0]) // (n + 1)) - 1
    for m2 in range(start, start + 10 * (n + 2) + sum(abs(x) for x in a) + 10):
        if section_m2_range(D, fan, m2) is not None:
            return m2
    raise AssertionError("no sections found")


def natural_box(D: TorusDivisor, fan: FanAn, degree_span: int) -> Box:
    """Smallest box holding every section with ``m2 <= lowest + degree_span``."""
    lo2 = lowest_section_degree(D, fan)
    hi2 = lo2 + degree_span
    ranges = [r for m2 in range(lo2, hi2 + 1) if (r := section_m2_range(D, fan, m2))]
    return (min(r[0] for r in ranges), max(r[1] for r in ranges), lo2, hi2)


@dataclass(frozen=True)
class FilteredDims:
    """Dimensions by pole order; ``dims[m]`` is None when level ``m`` did not stabilize."""

    dims: tuple[int | None, ...]
    raw: tuple[int, ...]
    stabilized: tuple[bool, ...]

    @property
    def all_stabilized(self) -> bool:
        return all(self.stabilized)


def _pole_filtered_ranks(sections: Sequence[Vec], pole_cutoff: int) -> list[int]:
    out = []
    for m in range(pole_cutoff + 1):
        vecs = []
        for sec in sections:
            for t in range(m + 1):
                # (h - 1)^t * chi^sec, expanded binomially
                vec: dict[Vec, int] = {}
                coeff = 1
                for e in range(t + 1):
                    key = (sec[0], sec[1] + e)
                    vec[key] = vec.get(key, 0) + coeff * (-1) ** (t - e)
                    coeff = coeff * (t - e) // (e + 1)
                vecs.append(vec)
        out.append(rank(vecs))
    return out


def hom_on_Yv_truncated(d_src: DivisorClass, d_tgt: DivisorClass, pole_cutoff: int,
                        box: Box | None, fan: FanAn) -> FilteredDims:
    """Pole-filtered dimensions of boxed homs on the complement of ``h = 1``.

    Level ``m`` counts ``sigma / (h - 1)^{m'}`` for ``m' <= m`` written over the
    common denominator ``(h - 1)^m``.  The upper bound on ``m2`` is the degree
    cap of the truncation; the level is stabilized when widening the ``m1``
    range and lowering ``m2`` by one step leaves the dimension unchanged.
    """
    if pole_cutoff < 0:
        raise InvalidParameter("pole_cutoff must be nonnegative")
    if box is None:
        return FilteredDims((0,) * (pole_cutoff + 1), (0,) * (pole_cutoff + 1),
                            (True,) * (pole_cutoff + 1))
    D = bundle_with_degrees(d_tgt, fan) - bundle_with_degrees(d_src, fan)
    inner = sorted(sections_in_box(D, box, fan))
    m1_lo, m1_hi, m2_lo, m2_hi = box
    wider = (m1_lo - 1, m1_hi + 1, m2_lo - 1, m2_hi)
    outer = sorted(sections_in_box(D, wider, fan))
    raw = _pole_filtered_ranks(inner, pole_cutoff)
    if len(outer) == len(inner):
        check = raw
    else:
        check = _pole_filtered_ranks(outer, pole_cutoff)
    stab = tuple(a == b for a, b in zip(raw, check))
    dims = tuple(r if s else None for r, s in zip(raw, stab))
    return FilteredDims(dims, tuple(raw), stab)


def chart_exponents(fan: FanAn, c: int) -> tuple[Vec, Vec]:
    """Characters ``(X_c, Y_c)`` dual to the rays ``(v_c, v_{c+1})`` of cone ``c``."""
    a, b = fan.rays[c], fan.rays[c + 1]
    return _dual(a, b), _dual(b, a)


def _dual(a: Vec, b: Vec) -> Vec:
    """The character pairing to 1 with ``a`` and to 0 with ``b``."""
    d = det(a, b)
    if d not in (1, -1):
        raise AssertionError("cone is not smooth")
    return (b[1] * d, -b[0] * d)


def express_in_chart(m: Vec, fan: FanAn, c: int) -> Vec:
    """Exponents ``(e, f)`` with ``chi^m = X_c^e Y_c^f``."""
    a, b = fan.rays[c], fan.rays[c + 1]
    return pair(m, a), pair(m, b)
