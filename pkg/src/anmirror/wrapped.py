"""Wrapped generators, the binomial product, and the comparison maps.

A wrapped generator at level ``w`` is a monomial ``q`` of the twist-``w``
graded piece together with a fiber index ``0 <= j <= ord(q) + w``.  The map
``psi`` sends it to ``(s - 1)^j q'`` where ``q = s^ord(q) q'`` and ``s = xy``.
On the algebraic side, level ``w`` holds twists ``0 .. 2w`` and the structure
map multiplies by ``sign * (s - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable

from . import toric
from ._linalg import rank
from .errors import InternalInconsistency, InvalidParameter
from .fs_ring import Monomial, hom_degree, monomial_basis, ord_

S = Monomial(1, 1)


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise InvalidParameter(f"sign convention must be +1 or -1, got {sign!r}")
    return sign


@dataclass(frozen=True, order=True)
class WrappedGenerator:
    i0: int
    i1: int
    w: int
    q: Monomial
    j: int
    n: int

    def __post_init__(self):
        if self.q.degree(self.n) != hom_degree(self.i0, self.i1, self.w, self.n):
            raise InvalidParameter(f"{self.q} has the wrong degree for this block")
        if not 0 <= self.j <= ord_(self.q) + self.w:
            raise InvalidParameter(f"fiber index {self.j} out of range")

    def __str__(self) -> str:
        return f"({self.q})_{self.j}@w{self.w}[{self.i0}->{self.i1}]"


def wrapped_generators(i0: int, i1: int, w: int, n: int) -> list[WrappedGenerator]:
    if not (0 <= i0 <= n and 0 <= i1 <= n) or w < 0:
        raise InvalidParameter("indices out of range")
    return [WrappedGenerator(i0, i1, w, q, j, n)
            for q in monomial_basis(hom_degree(i0, i1, w, n), n)
            for j in range(ord_(q) + w + 1)]


def continuation(g: WrappedGenerator) -> WrappedGenerator:
    return WrappedGenerator(g.i0, g.i1, g.w + 1, g.q * S, g.j + 1, g.n)


def wrapped_product(g2: WrappedGenerator, g1: WrappedGenerator) -> dict[WrappedGenerator, int]:
    """``m2(g2, g1) = sum_t C(l, t) p_{j + k + t}`` with ``l`` the jump in ``ord``."""
    if g1.i1 != g2.i0 or g1.n != g2.n:
        raise InvalidParameter("generators are not composable")
    p = g2.q * g1.q
    ell = ord_(p) - ord_(g2.q) - ord_(g1.q)
    w = g1.w + g2.w
    top = g2.j + g1.j + ell
    if top > ord_(p) + w:
        raise InternalInconsistency(f"fiber index {top} overflows for {g2} * {g1}")
    return {WrappedGenerator(g1.i0, g2.i1, w, p, g2.j + g1.j + t, g1.n): comb(ell, t)
            for t in range(ell + 1)}


@dataclass(frozen=True)
class BElement:
    """Integer combination of twisted monomials in one block at level ``w``.

    The twist of a monomial is fixed by its degree, so terms are keyed by
    monomial alone.
    """

    i0: int
    i1: int
    w: int
    n: int
    terms: tuple[tuple[Monomial, int], ...] = ()

    @classmethod
    def build(cls, i0, i1, w, n, terms: dict[Monomial, int]) -> "BElement":
        base = i1 - i0
        for m, c in terms.items():
            if not c:
                continue
            twist, rem = divmod(m.degree(n) - base, n + 1)
            if rem or not 0 <= twist <= 2 * w:
                raise InvalidParameter(f"{m} is not a twist 0..{2 * w} monomial of block {i0}->{i1}")
        return cls(i0, i1, w, n, tuple(sorted((m, c) for m, c in terms.items() if c)))

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def twist(self, m: Monomial) -> int:
        return (m.degree(self.n) - (self.i1 - self.i0)) // (self.n + 1)

    def __add__(self, other: "BElement") -> "BElement":
        if (self.i0, self.i1, self.w) != (other.i0, other.i1, other.w):
            raise InvalidParameter("elements live in different pieces")
        out = self.as_dict()
        for m, c in other.terms:
            out[m] = out.get(m, 0) + c
        return BElement.build(self.i0, self.i1, self.w, self.n, out)

    def __mul__(self, other: "BElement") -> "BElement":
        """Composition: ``self`` after ``other``."""
        if other.i1 != self.i0:
            raise InvalidParameter("elements are not composable")
        out: dict[Monomial, int] = {}
        for m2, c2 in self.terms:
            for m1, c1 in other.terms:
                m = m2 * m1
                out[m] = out.get(m, 0) + c1 * c2
        return BElement.build(other.i0, self.i1, self.w + other.w, self.n, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{m}" for m, c in self.terms)


def s_minus_one_power(j: int, sign: int = 1) -> dict[Monomial, int]:
    """``(sign * (s - 1))^j`` as a combination of powers of ``s``."""
    return {Monomial(t, t): sign ** j * comb(j, t) * (-1) ** (j - t) for t in range(j + 1)}


def _times(poly: dict[Monomial, int], m: Monomial) -> dict[Monomial, int]:
    return {a * m: c for a, c in poly.items()}


def psi(g: WrappedGenerator, sign: int = 1) -> BElement:
    """``sign^w (s - 1)^j q'`` at level ``w``.

    With ``sign = -1`` the extra factor ``(-1)^w`` makes ``psi`` commute with
    multiplication by ``1 - s``.
    """
    _check_sign(sign)
    d = ord_(g.q)
    reduced = Monomial(g.q.p - d, g.q.q - d)
    terms = _times(s_minus_one_power(g.j), reduced)
    scale = sign ** g.w
    return BElement.build(g.i0, g.i1, g.w, g.n, {m: scale * c for m, c in terms.items()})


def b_structure_map(e: BElement, sign: int = 1) -> BElement:
    _check_sign(sign)
    out: dict[Monomial, int] = {}
    for m, c in e.terms:
        for a, ca in s_minus_one_power(1, sign).items():
            out[m * a] = out.get(m * a, 0) + c * ca
    return BElement.build(e.i0, e.i1, e.w + 1, e.n, out)


def promote(e: BElement, level: int, sign: int = 1) -> BElement:
    if level < e.w:
        raise InvalidParameter("cannot promote to a lower level")
    for _ in range(level - e.w):
        e = b_structure_map(e, sign)
    return e


def b_basis(i0: int, i1: int, w: int, n: int) -> list[Monomial]:
    """Monomials of the block at level ``w`` (twists ``0 .. 2w``)."""
    return [m for k in range(2 * w + 1) for m in monomial_basis(hom_degree(i0, i1, k, n), n)]


@dataclass(frozen=True)
class LimitClass:
    """A representative at some level of a class in a colimit.

    ``kind`` is ``"B"`` for algebraic elements and ``"A"`` for combinations
    of wrapped generators; equality promotes both sides to a common level.
    """

    kind: str
    level: int
    element: object
    sign: int = 1

    def promoted(self, level: int) -> "LimitClass":
        if self.kind == "B":
            return LimitClass("B", level, promote(self.element, level, self.sign), self.sign)
        comb_: dict[WrappedGenerator, int] = dict(self.element)
        for _ in range(level - self.level):
            comb_ = {continuation(g): c for g, c in comb_.items()}
        return LimitClass("A", level, comb_, self.sign)

    def equals(self, other: "LimitClass", level: int | None = None) -> bool:
        if self.kind != other.kind:
            raise InvalidParameter("classes live in different colimits")
        top = max(self.level, other.level) if level is None else level
        a, b = self.promoted(top).element, other.promoted(top).element
        if self.kind == "B":
            return a.terms == b.terms
        return {g: c for g, c in a.items() if c} == {g: c for g, c in b.items() if c}


def _vec(e: BElement) -> dict[Monomial, int]:
    return e.as_dict()


def _in_span(vecs: list[dict], target: dict, base_rank: int | None = None) -> bool:
    r = rank(vecs) if base_rank is None else base_rank
    return rank(vecs + [target]) == r


@dataclass
class PsiReport:
    n: int
    w_max: int
    sign: int
    equivariance_failures: list[str] = field(default_factory=list)
    product_failures: list[str] = field(default_factory=list)
    index_overflows: list[str] = field(default_factory=list)
    binomial_failures: list[int] = field(default_factory=list)
    injectivity_failures: list[str] = field(default_factory=list)
    surjectivity_failures: list[str] = field(default_factory=list)
    max_promotion_used: int = 0
    promotion_budget: int = 0
    products_checked: int = 0

    @property
    def ok(self) -> bool:
        return not (self.equivariance_failures or self.product_failures or self.index_overflows
                    or self.binomial_failures or self.injectivity_failures
                    or self.surjectivity_failures)


def _combination_psi(comb_: dict[WrappedGenerator, int], sign: int, like: WrappedGenerator,
                     w: int) -> BElement:
    total = BElement.build(like.i0, like.i1, w, like.n, {})
    for g, c in comb_.items():
        img = psi(g, sign)
        total = total + BElement.build(img.i0, img.i1, img.w, img.n,
                                       {m: c * v for m, v in img.terms})
    return total


def binomial_identity_holds(ell: int) -> bool:
    """``s^l = sum_t C(l, t) (s - 1)^t`` coefficientwise."""
    lhs = {Monomial(ell, ell): 1}
    rhs: dict[Monomial, int] = {}
    for t in range(ell + 1):
        for m, c in s_minus_one_power(t).items():
            rhs[m] = rhs.get(m, 0) + comb(ell, t) * c
    return {m: c for m, c in rhs.items() if c} == lhs


def verify_psi_ring_isom(n: int, w_max: int, sign: int = 1,
                         promotion_budget: int | None = None) -> PsiReport:
    _check_sign(sign)
    budget = max(2, w_max) if promotion_budget is None else promotion_budget
    rep = PsiReport(n, w_max, sign, promotion_budget=budget)
    blocks = [(a, b) for a in range(n + 1) for b in range(n + 1)]
    for i0, i1 in blocks:
        for w in range(w_max):
            for g in wrapped_generators(i0, i1, w, n):
                if psi(continuation(g), sign).terms != b_structure_map(psi(g, sign), sign).terms:
                    rep.equivariance_failures.append(str(g))
    ells = set()
    for i0 in range(n + 1):
        for i1 in range(n + 1):
            for i2 in range(n + 1):
                for w1 in range(w_max + 1):
                    for w2 in range(w_max + 1 - w1):
                        for g1 in wrapped_generators(i0, i1, w1, n):
                            for g2 in wrapped_generators(i1, i2, w2, n):
                                rep.products_checked += 1
                                try:
                                    prod = wrapped_product(g2, g1)
                                except InternalInconsistency as exc:
                                    rep.index_overflows.append(str(exc))
                                    continue
                                ells.add(ord_(g2.q * g1.q) - ord_(g2.q) - ord_(g1.q))
                                lhs = _combination_psi(prod, sign, next(iter(prod)), w1 + w2)
                                rhs = psi(g2, sign) * psi(g1, sign)
                                if lhs.terms != rhs.terms:
                                    rep.product_failures.append(f"{g2} * {g1}: {lhs} vs {rhs}")
    rep.binomial_failures = sorted(l for l in ells if not binomial_identity_holds(l))
    for i0, i1 in blocks:
        images: dict[int, list[dict]] = {}
        ranks: dict[int, int] = {}

        def image_span(level: int) -> list[dict]:
            if level not in images:
                images[level] = [_vec(psi(g, sign)) for g in wrapped_generators(i0, i1, level, n)]
                ranks[level] = rank(images[level])
            return images[level]

        for w in range(w_max + 1):
            vecs = image_span(w)
            if ranks[w] != len(vecs):
                rep.injectivity_failures.append(f"block {i0}->{i1} level {w}: rank {ranks[w]} < {len(vecs)}")
            for m in b_basis(i0, i1, w, n):
                e = BElement.build(i0, i1, w, n, {m: 1})
                for extra in range(budget + 1):
                    target = promote(e, w + extra, sign)
                    span = image_span(w + extra)
                    if _in_span(span, _vec(target), ranks[w + extra]):
                        rep.max_promotion_used = max(rep.max_promotion_used, extra)
                        break
                else:
                    rep.surjectivity_failures.append(f"{m} at level {w}, block {i0}->{i1}")
    return rep


# Localization at 1 - s

def _pure_part(m: Monomial) -> tuple[Monomial, int]:
    d = ord_(m)
    return Monomial(m.p - d, m.q - d), d


@dataclass(frozen=True)
class LocalizedHom:
    """``numerator / (1 - s)^pole`` in a fixed block, kept in canonical form."""

    i0: int
    i1: int
    n: int
    numerator: tuple[tuple[Monomial, Fraction], ...]
    pole: int

    @classmethod
    def make(cls, i0, i1, n, numerator: dict[Monomial, Fraction | int], pole: int) -> "LocalizedHom":
        num = {m: Fraction(c) for m, c in numerator.items() if c}
        for m in num:
            if (m.degree(n) - (i1 - i0)) % (n + 1) or m.degree(n) < i1 - i0:
                raise InvalidParameter(f"{m} does not belong to block {i0}->{i1}")
        if not num:
            pole = 0
        while pole > 0:
            quotient = _divide_by_one_minus_s(num)
            if quotient is None:
                break
            num, pole = quotient, pole - 1
        return cls(i0, i1, n, tuple(sorted(num.items())), pole)

    def as_dict(self) -> dict[Monomial, Fraction]:
        return dict(self.numerator)

    def over(self, pole: int) -> dict[Monomial, Fraction]:
        """Numerator after rewriting over ``(1 - s)^pole``."""
        if pole < self.pole:
            raise InvalidParameter("cannot lower the pole order")
        num = self.as_dict()
        for _ in range(pole - self.pole):
            nxt: dict[Monomial, Fraction] = {}
            for m, c in num.items():
                nxt[m] = nxt.get(m, 0) + c
                nxt[m * S] = nxt.get(m * S, 0) - c
            num = {m: c for m, c in nxt.items() if c}
        return num

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalizedHom):
            return NotImplemented
        return ((self.i0, self.i1, self.numerator, self.pole)
                == (other.i0, other.i1, other.numerator, other.pole))

    def __hash__(self) -> int:
        return hash((self.i0, self.i1, self.numerator, self.pole))

    def __add__(self, other: "LocalizedHom") -> "LocalizedHom":
        top = max(self.pole, other.pole)
        num = self.over(top)
        for m, c in other.over(top).items():
            num[m] = num.get(m, 0) + c
        return LocalizedHom.make(self.i0, self.i1, self.n, num, top)

    def __mul__(self, other: "LocalizedHom") -> "LocalizedHom":
        if other.i1 != self.i0:
            raise InvalidParameter("fractions are not composable")
        num: dict[Monomial, Fraction] = {}
        for m2, c2 in self.numerator:
            for m1, c1 in other.numerator:
                num[m2 * m1] = num.get(m2 * m1, 0) + c1 * c2
        return LocalizedHom.make(other.i0, self.i1, self.n, num, self.pole + other.pole)


def _divide_by_one_minus_s(num: dict[Monomial, Fraction]) -> dict[Monomial, Fraction] | None:
    """Exact quotient by ``1 - s`` or None when it does not divide."""
    by_pure: dict[Monomial, dict[int, Fraction]] = {}
    for m, c in num.items():
        pure, d = _pure_part(m)
        by_pure.setdefault(pure, {})[d] = c
    if not num:
        return None
    out: dict[Monomial, Fraction] = {}
    for pure, coeffs in by_pure.items():
        if sum(coeffs.values()) != 0:
            return None
        running = Fraction(0)
        for d in range(max(coeffs) + 1):
            running += coeffs.get(d, 0)
            if running:
                out[Monomial(pure.p + d, pure.q + d)] = running
    return out


def block_monomials(i0: int, i1: int, n: int, twist_cap: int) -> list[Monomial]:
    return [m for k in range(twist_cap + 1) for m in monomial_basis(hom_degree(i0, i1, k, n), n)]


@dataclass(frozen=True)
class LocalizedBlock:
    i0: int
    i1: int
    n: int
    twist_cap: int
    dims: tuple[int, ...]
    basis: tuple[tuple[LocalizedHom, ...], ...]


def localized_hom_block(i0: int, i1: int, n: int, level_cutoff: int, twist_cap: int) -> LocalizedBlock:
    """Pole-filtered span of ``Q / (1 - s)^m`` with ``Q`` of twist at most ``twist_cap``."""
    mons = block_monomials(i0, i1, n, twist_cap)
    dims, bases = [], []
    for m in range(level_cutoff + 1):
        fracs = [LocalizedHom.make(i0, i1, n, {q: 1}, mp) for mp in range(m + 1) for q in mons]
        vecs = [f.over(m) for f in fracs]
        dims.append(rank(vecs))
        bases.append(tuple(dict.fromkeys(fracs)))
    return LocalizedBlock(i0, i1, n, twist_cap, tuple(dims), tuple(bases))


@dataclass(frozen=True)
class BFilteredDims:
    dims: tuple[int, ...]
    levels_used: tuple[int, ...]
    certified: tuple[bool, ...]


def b_filtered_dims(i0: int, i1: int, n: int, pole_cutoff: int, twist_cap: int,
                    sign: int = 1) -> BFilteredDims:
    """Same filtration computed inside the algebraic direct system.

    The class ``Q / (s - 1)^{m'}`` is represented at level ``N`` by
    ``(sign (s - 1))^{N - m'} Q``; ``N = max(m, twist_cap)`` keeps every
    representative inside the twist range ``0 .. 2N``.  The certificate is
    that promoting the whole span one and two more levels keeps its rank.
    """
    _check_sign(sign)
    mons = block_monomials(i0, i1, n, twist_cap)
    dims, levels, certs = [], [], []
    for m in range(pole_cutoff + 1):
        N = max(m, twist_cap)
        elems = []
        for mp in range(m + 1):
            for q in mons:
                poly = _times(s_minus_one_power(N - mp, sign), q)
                elems.append(BElement.build(i0, i1, N, n, poly))
        r = rank([e.as_dict() for e in elems])
        ok = all(rank([promote(e, N + extra, sign).as_dict() for e in elems]) == r
                 for extra in (1, 2))
        dims.append(r)
        levels.append(N)
        certs.append(ok)
    return BFilteredDims(tuple(dims), tuple(levels), tuple(certs))


# Comparison with the toric side

ORIENTATIONS = ("winding", "delta")


def mirror_bundle(i: int, n: int, orientation: str) -> toric.DivisorClass:
    """Line bundle paired with thimble ``i``.

    ``"delta"`` is the bundle of degree ``+1`` on ``E_i``; ``"winding"`` is
    the transform of the path winding ``+1`` across the ``i``-th segment,
    which has degree ``-1`` on ``E_i``.  Index 0 is the trivial bundle.
    """
    if orientation not in ORIENTATIONS:
        raise InvalidParameter(f"unknown orientation {orientation!r}")
    return toric.unit_class(n, i, 1 if orientation == "delta" else -1)


def toric_block(i0: int, i1: int, n: int, orientation: str) -> tuple[int, int]:
    """Toric bundle pair matched with the wrapped block ``i0 -> i1``.

    Degree ``+1`` bundles carry the opposite weights, so the matching
    reverses the indices.
    """
    if orientation == "winding":
        return i0, i1
    return n - i0, n - i1


def lowest_twist(i0: int, i1: int, n: int) -> int:
    return 0 if i1 >= i0 else 1


@dataclass
class CompareRecord:
    block: tuple[int, int]
    toric_block: tuple[int, int]
    pole: int
    localized: int
    algebraic: int
    algebraic_certified: bool
    toric: int | None
    status: str


def compare_with_mirror_side(n: int, pole_cutoff: int, twist_cap: int,
                             orientation: str = "delta", sign: int = 1) -> list[CompareRecord]:
    """Block-by-block filtered dimensions on the three sides.

    The toric degree window starts at the lowest degree carrying a section
    and has the same length as the nonempty twist window of the block.
    """
    fan = toric.build_fan(n)
    out = []
    for i0 in range(n + 1):
        for i1 in range(n + 1):
            loc = localized_hom_block(i0, i1, n, pole_cutoff, twist_cap)
            alg = b_filtered_dims(i0, i1, n, pole_cutoff, twist_cap, sign)
            t0, t1 = toric_block(i0, i1, n, orientation)
            d_src, d_tgt = mirror_bundle(t0, n, orientation), mirror_bundle(t1, n, orientation)
            D = toric.bundle_with_degrees(d_tgt, fan) - toric.bundle_with_degrees(d_src, fan)
            span = twist_cap - lowest_twist(i0, i1, n)
            tor = toric.hom_on_Yv_truncated(d_src, d_tgt, pole_cutoff,
                                            toric.natural_box(D, fan, span), fan)
            for m in range(pole_cutoff + 1):
                t = tor.dims[m]
                if t is None or not alg.certified[m]:
                    status = "not-stabilized"
                elif loc.dims[m] == alg.dims[m] == t:
                    status = "pass"
                else:
                    status = "fail"
                out.append(CompareRecord((i0, i1), (t0, t1), m, loc.dims[m], alg.dims[m],
                                         alg.certified[m], t, status))
    return out
