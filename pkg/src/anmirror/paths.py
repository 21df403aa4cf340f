"""Admissible polylines in the punctured plane and their winding vectors.

Points are pairs of ``Fraction``.  The punctures ``a_0 < ... < a_n`` sit on
the positive real axis and ``seg_i = [a_{i-1}, a_i]`` is the i-th segment.
Two independent winding computations are provided: signed crossings with
the segments, and an exact angle lift read off at the circles ``|z| = a_i``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateCrossing, InvalidInput, InvalidParameter, OutOfRange
from .toric import DivisorClass

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class PLPath:
    vertices: tuple[Point, ...]

    @classmethod
    def from_pairs(cls, pairs) -> "PLPath":
        return cls(tuple((Fraction(x), Fraction(y)) for x, y in pairs))

    def segments(self):
        return zip(self.vertices, self.vertices[1:])

    def __len__(self) -> int:
        return len(self.vertices)


def as_punctures(a: Sequence) -> tuple[Fraction, ...]:
    a = tuple(Fraction(x) for x in a)
    if len(a) < 2:
        raise InvalidParameter("need at least two punctures")
    if a[0] <= 0 or any(x >= y for x, y in zip(a, a[1:])):
        raise InvalidParameter("punctures must be positive and strictly increasing")
    return a


def _norm2(p: Point) -> Fraction:
    return p[0] * p[0] + p[1] * p[1]


def _cross(p: Point, q: Point) -> Fraction:
    return p[0] * q[1] - p[1] * q[0]


def _dot(p: Point, q: Point) -> Fraction:
    return p[0] * q[0] + p[1] * q[1]


def _sub(p: Point, q: Point) -> Point:
    return p[0] - q[0], p[1] - q[1]


def _on_segment(c: Point, p: Point, q: Point) -> bool:
    """Whether ``c`` lies on the closed segment ``pq``."""
    if _cross(_sub(q, p), _sub(c, p)) != 0:
        return False
    return (min(p[0], q[0]) <= c[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= c[1] <= max(p[1], q[1]))


def _check_polyline(path: PLPath) -> None:
    if len(path.vertices) < 2:
        raise InvalidInput("a path needs at least two vertices")
    for k, (p, q) in enumerate(path.segments()):
        if p == q:
            raise InvalidInput(f"vertices {k} and {k + 1} coincide")


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    d1 = _cross(_sub(p2, p1), _sub(q1, p1))
    d2 = _cross(_sub(p2, p1), _sub(q2, p1))
    d3 = _cross(_sub(q2, q1), _sub(p1, q1))
    d4 = _cross(_sub(q2, q1), _sub(p2, q1))
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True
    return (_on_segment(q1, p1, p2) or _on_segment(q2, p1, p2)
            or _on_segment(p1, q1, q2) or _on_segment(p2, q1, q2))


def _first_self_intersection(path: PLPath) -> tuple[int, int] | None:
    segs = list(path.segments())
    for i, (p1, p2) in enumerate(segs):
        for j in range(i + 1, len(segs)):
            q1, q2 = segs[j]
            if j == i + 1:
                # neighbours share p2 = q1; they may only fold back onto each other
                if _cross(_sub(p2, p1), _sub(q2, q1)) == 0 and _dot(_sub(p2, p1), _sub(q2, q1)) < 0:
                    return i, j
                continue
            if _segments_intersect(p1, p2, q1, q2):
                return i, j
    return None


def is_admissible(path: PLPath, punctures: Sequence) -> Admissibility:
    a = as_punctures(punctures)
    _check_polyline(path)
    lo, hi = a[0], a[-1]
    origin = (Fraction(0), Fraction(0))
    for k, p in enumerate(path.vertices):
        if p == origin:
            return Admissibility(False, f"vertex {k} is the origin")
        if p[1] == 0 and lo <= p[0] <= hi:
            return Admissibility(False, f"vertex {k} lies on the segments between punctures")
    if _norm2(path.vertices[0]) >= lo * lo:
        return Admissibility(False, "first vertex is not inside the smallest puncture circle")
    if _norm2(path.vertices[-1]) <= hi * hi:
        return Admissibility(False, "last vertex is not outside the largest puncture circle")
    for k, (p, q) in enumerate(path.segments()):
        if _on_segment(origin, p, q):
            return Admissibility(False, f"segment {k} passes through the origin")
        for i, x in enumerate(a):
            if _on_segment((x, Fraction(0)), p, q):
                return Admissibility(False, f"segment {k} passes through puncture a_{i}")
        if p[1] == 0 and q[1] == 0 and max(p[0], q[0]) >= lo and min(p[0], q[0]) <= hi:
            return Admissibility(False, f"segment {k} runs along the segments between punctures")
    if not is_strongly_admissible(path):
        hit = _first_self_intersection(path)
        if hit is not None:
            return Admissibility(False, f"segments {hit[0]} and {hit[1]} intersect")
    return Admissibility(True)


def is_strongly_admissible(path: PLPath) -> bool:
    """Whether ``|gamma|^2`` strictly increases along every segment.

    On the segment ``p + t d`` this is ``p . d >= 0``, since the derivative
    ``2 p.d + 2 t |d|^2`` is then positive for ``t > 0``.
    """
    _check_polyline(path)
    return all(_dot(p, _sub(q, p)) >= 0 for p, q in path.segments())


# Winding by signed crossings

def crossing_events(path: PLPath, punctures: Sequence) -> list[tuple[int, int, int]]:
    """``(segment index, i, sign)`` for every crossing of the segment ``[a_{i-1}, a_i]``."""
    a = as_punctures(punctures)
    _check_polyline(path)
    lo, hi = a[0], a[-1]
    events = []
    for k, (p, q) in enumerate(path.segments()):
        for v in (p, q):
            if v[1] == 0 and lo <= v[0] <= hi:
                raise DegenerateCrossing(f"segment {k} touches the puncture segments at {v}")
        if p[1] == 0 and q[1] == 0:
            continue
        if (p[1] > 0) == (q[1] > 0) or p[1] == 0 or q[1] == 0:
            continue
        x = p[0] + (q[0] - p[0]) * (-p[1]) / (q[1] - p[1])
        if x < lo or x > hi:
            continue
        if x in a:
            raise DegenerateCrossing(f"segment {k} passes through the puncture at {x}")
        i = sum(1 for t in a if t < x)
        events.append((k, i, 1 if q[1] > p[1] else -1))
    return events


def winding_by_crossings(path: PLPath, punctures: Sequence) -> tuple[int, ...]:
    a = as_punctures(punctures)
    w = [0] * (len(a) - 1)
    for _, i, sign in crossing_events(path, a):
        w[i - 1] += sign
    return tuple(w)


# Winding by exact angle lift

def _quadrant(p: Point) -> int:
    """Half-open quadrants: 0 is x > 0, y >= 0, and so on counterclockwise."""
    x, y = p
    if x > 0 and y >= 0:
        return 0
    if x <= 0 and y > 0:
        return 1
    if x < 0 and y <= 0:
        return 2
    return 3


def _quarter_step(q_from: int, q_to: int, turn_sign: int) -> int:
    d = (q_to - q_from) % 4
    if d == 3:
        return -1
    if d == 2:
        return 2 if turn_sign > 0 else -2
    return d


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _coordinate_sign_at_root(p0: Fraction, d0: Fraction, p: Point, d: Point, r2: Fraction) -> int:
    """Sign of ``p0 + t* d0`` where ``t*`` solves ``|p + t d|^2 = r2`` on an increasing segment."""
    if d0 == 0:
        return _sign(p0)
    t0 = -p0 / d0
    if t0 <= 0:
        after = True
    elif t0 >= 1:
        after = False
    else:
        f = _norm2((p[0] + t0 * d[0], p[1] + t0 * d[1])) - r2
        if f == 0:
            return 0
        after = f < 0  # the root comes after t0 exactly when |.|^2 is still too small there
    return _sign(d0) if after else -_sign(d0)


def circle_crossing_quarters(path: PLPath, radii: Sequence[Fraction]) -> list[int]:
    """Lifted quarter-turn index at the unique point of modulus ``r`` for each ``r``.

    The quarter index is the number of quarter-turn boundaries crossed since
    the first vertex, offset by that vertex's quadrant, so ``index // 4`` is
    the number of completed turns in the lifted angle.
    """
    verts = path.vertices
    lifted = [_quadrant(verts[0])]
    for p, q in path.segments():
        lifted.append(lifted[-1] + _quarter_step(_quadrant(p), _quadrant(q), _sign(_cross(p, q))))
    out = []
    for r in radii:
        r2 = Fraction(r) ** 2
        for k, (p, q) in enumerate(path.segments()):
            if _norm2(p) <= r2 <= _norm2(q):
                break
        else:
            raise InvalidInput(f"path never reaches modulus {r}")
        d = _sub(q, p)
        sx = _coordinate_sign_at_root(p[0], d[0], p, d, r2)
        sy = _coordinate_sign_at_root(p[1], d[1], p, d, r2)
        if sx == 0 and sy == 0:
            raise InvalidInput("path passes through the origin")
        # a representative point with the same quadrant as the crossing point
        rep = (Fraction(sx), Fraction(sy))
        turn = _sign(_cross(p, d))
        out.append(lifted[k] + _quarter_step(_quadrant(p), _quadrant(rep), turn))
    return out


def winding_by_lift(path: PLPath, punctures: Sequence) -> tuple[int, ...]:
    """Winding vector from the lifted angle at the circles through the punctures.

    Sliding each circle point along its circle to ``-a_i`` without passing
    ``a_i`` moves the lifted angle to the odd multiple of pi in the same turn,
    so the increments of ``floor(angle / 2 pi)`` are the winding numbers.
    """
    a = as_punctures(punctures)
    if not is_strongly_admissible(path):
        raise InvalidInput("winding by lift needs a strongly admissible path")
    quarters = circle_crossing_quarters(path, a)
    turns = [q // 4 for q in quarters]
    return tuple(t1 - t0 for t0, t1 in zip(turns, turns[1:]))


# Canonical representatives

def _unit_directions(quarters: int, steps: int) -> list[Point]:
    """Rational unit vectors sweeping ``quarters`` quarter-turns starting from -1.

    Directions inside each quarter come from the rational parametrisation
    ``((1 - t^2), 2t) / (1 + t^2)`` with ``t = (2j + 1) / (2 steps)``; the
    positive real direction itself is never used.
    """
    base = []
    for j in range(steps):
        t = Fraction(2 * j + 1, 2 * steps)
        base.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    out = []
    direction = 1 if quarters > 0 else -1
    for k in range(abs(quarters)):
        # quadrant entered: starting at angle pi, moving counterclockwise enters quadrant 2
        quad = (2 + k) % 4 if direction > 0 else (1 - k) % 4
        pts = base if direction > 0 else base[::-1]
        for x, y in pts:
            for _ in range(quad):
                x, y = -y, x
            out.append((x, y))
    return out


def _spiral(r0: Fraction, r1: Fraction, turns: int) -> list[Point]:
    """Strongly admissible polyline from ``-r0`` to ``-r1`` making ``turns`` full turns."""
    if turns == 0:
        return [(-r0, Fraction(0)), (-r1, Fraction(0))]
    steps = 4
    while True:
        dirs = [(Fraction(-1), Fraction(0))] + _unit_directions(4 * turns, steps) + [(Fraction(-1), Fraction(0))]
        count = len(dirs) - 1
        radii = [r0 + (r1 - r0) * Fraction(k, count) for k in range(count + 1)]
        # |gamma| increases along the chord iff r_{k+1} cos(angle) >= r_k
        if all(radii[k + 1] * _dot(dirs[k], dirs[k + 1]) >= radii[k] for k in range(count)):
            return [(r * d[0], r * d[1]) for r, d in zip(radii, dirs)]
        steps *= 2


def path_with_winding(punctures: Sequence, winding: Sequence[int]) -> PLPath:
    """The canonical path through ``-a_i`` turning ``w_i`` times between circles."""
    a = as_punctures(punctures)
    if len(winding) != len(a) - 1:
        raise InvalidParameter("winding vector has the wrong length")
    verts: list[Point] = [(-a[0] / 2, Fraction(0))]
    for i, t in enumerate(winding):
        piece = _spiral(a[i], a[i + 1], int(t))
        verts.extend(piece if verts[-1] != piece[0] else piece[1:])
    verts.append((-2 * a[-1], Fraction(0)))
    # merge collinear radial runs on the negative axis
    merged = [verts[0]]
    for k in range(1, len(verts) - 1):
        p, c, q = merged[-1], verts[k], verts[k + 1]
        if p[1] == c[1] == q[1] == 0 and p[0] < 0 and q[0] < 0:
            continue
        merged.append(c)
    merged.append(verts[-1])
    return PLPath(tuple(merged))


def normalize_path(path: PLPath, punctures: Sequence) -> PLPath:
    """A strongly admissible representative through every ``-a_i``.

    The turn counts at the puncture circles determine the class of the path,
    so the canonical path with the same counts is homotopic to it.
    """
    a = as_punctures(punctures)
    if not is_strongly_admissible(path):
        raise InvalidInput("normalization needs a strongly admissible path")
    return path_with_winding(a, winding_by_lift(path, a))


def gamma0(punctures: Sequence) -> PLPath:
    a = as_punctures(punctures)
    return PLPath(((-a[0] / 8, Fraction(0)), (-4 * a[-1], Fraction(0))))


def syz_transform(path: PLPath, punctures: Sequence) -> DivisorClass:
    """Degrees of the mirror line bundle: the negated winding vector."""
    a = as_punctures(punctures)
    if is_strongly_admissible(path):
        w = winding_by_lift(path, a)
        if w != winding_by_crossings(path, a):
            raise AssertionError("winding algorithms disagree")
    else:
        adm = is_admissible(path, a)
        if not adm:
            raise InvalidInput(f"path is not admissible: {adm.reason}")
        w = winding_by_crossings(path, a)
    return DivisorClass(tuple(-x for x in w))


def random_strongly_admissible_path(punctures: Sequence, rng: random.Random,
                                    steps_per_annulus: int = 40) -> PLPath:
    """A seeded random strongly admissible polyline.

    Radii grow geometrically; each angle step stays below ``arccos`` of the
    radius ratio so that the modulus keeps increasing along the chord.  Float
    samples are rounded to rationals and re-checked exactly.
    """
    a = as_punctures(punctures)
    fa = [float(x) for x in a]
    while True:
        radii = [fa[0] / 2]
        bounds = [fa[0] / 2] + fa + [2 * fa[-1]]
        for lo, hi in zip(bounds, bounds[1:]):
            ratio = (hi / lo) ** (1 / steps_per_annulus)
            for k in range(1, steps_per_annulus + 1):
                radii.append(lo * ratio ** k)
        theta = math.pi + rng.uniform(-0.5, 0.5)
        bias = rng.choice([-1, 0, 1])
        pts = []
        for k, r in enumerate(radii):
            if k:
                if rng.random() < 2 / steps_per_annulus:
                    bias = rng.choice([-1, 0, 1])
                limit = math.acos(min(1.0, radii[k - 1] / r)) * 0.9
                step = rng.uniform(-limit, limit) if bias == 0 else bias * rng.uniform(0.3, 1.0) * limit
                theta += step
            pts.append((Fraction(r * math.cos(theta)).limit_denominator(10 ** 6),
                        Fraction(r * math.sin(theta)).limit_denominator(10 ** 6)))
        if any(p == q for p, q in zip(pts, pts[1:])):
            continue
        path = PLPath(tuple(pts))
        if not is_strongly_admissible(path):
            continue
        if is_admissible(path, a):
            try:
                crossing_events(path, a)
            except DegenerateCrossing:
                continue
            return path


# The explicit Lagrangian section

@dataclass(frozen=True)
class SectionPoint:
    s: float
    lam: float
    z: complex
    u: complex
    v: complex


def _g(s: float, punctures: Sequence) -> float:
    if abs(s) > 700:
        raise OutOfRange(f"s = {s} is beyond the representable range")
    z = -math.exp(s)
    val = 1.0
    for a in punctures:
        val *= z - float(a)
    return val / z


def section_L0(s: float, lam: float, punctures: Sequence) -> SectionPoint:
    """Point of the zero section over ``(s, lam)``.

    Uses ``g = f(-e^s) / (-e^s)`` so that ``u v = f(z) / z`` holds on the nose;
    the branch with the larger square is computed first for stability.
    """
    if not (math.isfinite(s) and math.isfinite(lam)):
        raise OutOfRange("non-finite base point")
    g = _g(s, punctures)
    R = math.hypot(lam, g)
    if lam >= 0:
        uu = math.sqrt(R + lam)
        vv = math.copysign(abs(g) / uu, g) if uu else 0.0
    else:
        vabs = math.sqrt(R - lam)
        vv = math.copysign(vabs, g) if g else vabs
        uu = abs(g) / vabs
    return SectionPoint(s, lam, complex(-math.exp(s), 0.0), complex(uu), complex(vv))


def f_over_z(z: complex, punctures: Sequence) -> complex:
    val = 1 + 0j
    for a in punctures:
        val *= z - float(a)
    return val / z


def syz_projection(p: SectionPoint) -> tuple[float, float]:
    return math.log(abs(p.z)), 0.5 * (abs(p.u) ** 2 - abs(p.v) ** 2)


@dataclass(frozen=True)
class SectionReport:
    max_residency: float
    max_projection_error: float
    max_pullback: float


def check_section(punctures: Sequence, size: int = 21, lam_range: float = 2.0,
                  h: float = 1e-5) -> SectionReport:
    """Residency, projection and isotropy errors of the section on a grid."""
    logs = [math.log(float(a)) for a in punctures]
    ss = np.linspace(logs[0] - 1, logs[-1] + 1, size)
    ls = np.linspace(-lam_range, lam_range, size)
    res = proj = pull = 0.0

    def coords(s, lam):
        p = section_L0(s, lam, punctures)
        return np.array([p.z, p.u, p.v])

    for s in ss:
        for lam in ls:
            p = section_L0(float(s), float(lam), punctures)
            g = f_over_z(p.z, punctures)
            res = max(res, abs(p.u * p.v - g) / (1 + abs(g)))
            ps, pl = syz_projection(p)
            proj = max(proj, abs(ps - s), abs(pl - lam))
            ds = (coords(s + h, lam) - coords(s - h, lam)) / (2 * h)
            dl = (coords(s, lam + h) - coords(s, lam - h)) / (2 * h)
            z = p.z
            # omega on (d/ds, d/dlam), up to a constant factor
            form = (ds[0] * np.conj(dl[0])).imag / abs(z) ** 2
            form += (ds[1] * np.conj(dl[1])).imag + (ds[2] * np.conj(dl[2])).imag
            pull = max(pull, abs(form))
    return SectionReport(float(res), float(proj), float(pull))
