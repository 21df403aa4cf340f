"""Deterministic SVG figures: the base with walls, thimble lifts, wrapping stacks.

Documents are assembled by hand with fixed float formatting, so identical
arguments give identical bytes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from xml.sax.saxutils import escape

from . import fs_ring
from .fs_ring import Monomial, ThimbleLift, label_generators, monomial_basis, ord_
from .wrapped import wrapped_generators

HEADER = ('<?xml version="1.0" encoding="UTF-8"?>\n'
          '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
          'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n')
STYLE = ("<style>.wall{stroke:#c33;stroke-width:1.5}.singular{stroke:#000;stroke-width:2}"
         ".frame{fill:none;stroke:#444}.glue{stroke:#444;stroke-dasharray:6 4}"
         ".lift0{fill:none;stroke:#1f5fbf;stroke-width:1.5}.lift1{fill:none;stroke:#d2691e;stroke-width:1.5}"
         ".s0{fill:#000}.point{fill:#2a2}.gen{fill:#333}.continuation{stroke:#999}"
         "text{font-family:sans-serif;font-size:11px}</style>\n")


def _f(x: float) -> str:
    s = f"{float(x):.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _doc(width: int, height: int, body: list[str]) -> str:
    return HEADER.format(w=width, h=height) + STYLE + "".join(body) + "</svg>\n"


def _text(x, y, s: str, cls: str = "", extra: str = "") -> str:
    c = f' class="{cls}"' if cls else ""
    return f'<text x="{_f(x)}" y="{_f(y)}"{c}{extra}>{escape(s)}</text>\n'


def _cross(x: float, y: float, size: float = 5) -> str:
    return (f'<g class="singular"><line x1="{_f(x - size)}" y1="{_f(y - size)}" x2="{_f(x + size)}" '
            f'y2="{_f(y + size)}"/><line x1="{_f(x - size)}" y1="{_f(y + size)}" '
            f'x2="{_f(x + size)}" y2="{_f(y - size)}"/></g>\n')


def plot_base(n: int, punctures=None) -> str:
    """Base half-plane with one vertical wall through each singular point."""
    a = [Fraction(i + 1) for i in range(n + 1)] if punctures is None else [Fraction(x) for x in punctures]
    logs = [math.log(float(x)) for x in a]
    lo, hi = logs[0] - 1.0, logs[-1] + 1.0
    width, height, pad = 520, 300, 30

    def X(s: float) -> float:
        return pad + (s - lo) / (hi - lo) * (width - 2 * pad)

    mid = height / 2
    body = [f'<rect class="frame" x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}"/>\n']
    for i, s in enumerate(logs):
        body.append(f'<line class="wall" x1="{_f(X(s))}" y1="{pad}" x2="{_f(X(s))}" y2="{height - pad}"/>\n')
    for i, s in enumerate(logs):
        body.append(_cross(X(s), mid))
        body.append(_text(X(s) + 6, mid - 8, f"s_{i}"))
    body.append(_text(pad, height - 8, "log|z|"))
    body.append(_text(4, pad - 10, "moment"))
    return _doc(width, height, body)


def _lift_polylines(lift: ThimbleLift) -> list[tuple[int, list[tuple[Fraction, Fraction]]]]:
    pts = [(-fs_ring.R, lift(-fs_ring.R)), (Fraction(0), lift(Fraction(0))), (fs_ring.R, lift(fs_ring.R))]
    values = [p[1] for p in pts]
    out = []
    for m in range(-math.ceil(max(values)), -math.floor(min(values)) + 1):
        out.append((m, [(r, t + m) for r, t in pts]))
    return out


def plot_thimbles(n: int, k_max: int, block: tuple[int, int] = (0, 0),
                  eps: Fraction | None = None) -> str:
    """One cylinder panel per wrap count ``k = 0 .. k_max`` for the given block.

    Horizontal edges are identified (dashed).  Each panel shows the wrapped
    lift of the source thimble, the lift of the target, the zero-fiber marks
    and the intersection points labelled by their monomials.
    """
    i0, i1 = block
    eps = fs_ring.default_epsilon(n, max(k_max, 1)) if eps is None else Fraction(eps)
    pw, ph, pad, gap = 420, 200, 40, 30
    width, height = pw + 2 * pad, (k_max + 1) * (ph + gap) + pad
    body = []
    for k in range(k_max + 1):
        top = pad + k * (ph + gap)

        def X(r) -> float:
            return pad + (float(r) + 2) / 4 * pw

        def Y(t) -> float:
            return top + ph - float(t) * ph

        cid = f"panel{k}"
        body.append(f'<clipPath id="{cid}"><rect x="{pad}" y="{top}" width="{pw}" height="{ph}"/></clipPath>\n')
        body.append(f'<g id="thimbles-k{k}">\n')
        body.append(f'<rect class="frame" x="{pad}" y="{top}" width="{pw}" height="{ph}"/>\n')
        for y in (top, top + ph):
            body.append(f'<line class="glue" x1="{pad}" y1="{y}" x2="{pad + pw}" y2="{y}"/>\n')
        A = ThimbleLift(i0, k, n, eps, 1)
        B = ThimbleLift(i1, 0, n, eps, 0)
        for cls, lift in (("lift1", A), ("lift0", B)):
            for m, poly in _lift_polylines(lift):
                pts = " ".join(f"{_f(X(r))},{_f(Y(t))}" for r, t in poly)
                body.append(f'<polyline class="{cls}" clip-path="url(#{cid})" points="{pts}"/>\n')
        for j in range(n + 1):
            body.append(f'<circle class="s0" cx="{_f(X(0))}" cy="{_f(Y(Fraction(2 * j + 1, 2 * (n + 1))))}" r="3"/>\n')
        labels = label_generators(A, B)
        for idx, p in enumerate(fs_ring.intersections(A, B)):
            t = p.theta - math.floor(p.theta)
            body.append(f'<circle class="point" cx="{_f(X(p.r))}" cy="{_f(Y(t))}" r="3.5"/>\n')
            body.append(_text(X(p.r) + 5, Y(t) - 5, str(labels[p]), "label",
                              f' data-gen="{i0},{i1},{k},{idx}"'))
        body.append(_text(pad, top - 6, f"Hom({i0} wrapped {k} times, {i1})"))
        body.append("</g>\n")
    return _doc(width, height, body)


def plot_wrapping(n: int, w_max: int, block: tuple[int, int] = (0, 0)) -> str:
    """Fiber-index stacks of wrapped generators with continuation arrows."""
    i0, i1 = block
    col, row, pad = 36, 18, 40
    levels = [wrapped_generators(i0, i1, w, n) for w in range(w_max + 1)]
    widths = [len(monomial_basis(fs_ring.hom_degree(i0, i1, w, n), n)) for w in range(w_max + 1)]
    max_stack = max((g.j for gens in levels for g in gens), default=0) + 1
    offsets, x = [], pad
    for wd in widths:
        offsets.append(x)
        x += max(wd, 1) * col + col
    width, height = x + pad, pad * 2 + max_stack * row + 20
    base_y = height - pad

    def pos(g) -> tuple[float, float]:
        return offsets[g.w] + g.q.q * col + col / 2, base_y - g.j * row

    body = []
    for w, gens in enumerate(levels):
        body.append(_text(offsets[w], pad - 10, f"w = {w}"))
        for g in gens:
            if w < w_max:
                nx, ny = pos(type(g)(g.i0, g.i1, g.w + 1, g.q * Monomial(1, 1), g.j + 1, g.n))
                gx, gy = pos(g)
                body.append(f'<line class="continuation" x1="{_f(gx)}" y1="{_f(gy)}" x2="{_f(nx)}" y2="{_f(ny)}"/>\n')
        for q in monomial_basis(fs_ring.hom_degree(i0, i1, w, n), n):
            body.append(_text(offsets[w] + q.q * col + 4, base_y + 16, str(q)))
        for g in gens:
            gx, gy = pos(g)
            body.append(f'<circle class="gen" cx="{_f(gx)}" cy="{_f(gy)}" r="4" data-gen="{escape(str(g))}"/>\n')
    return _doc(width, height, body)
