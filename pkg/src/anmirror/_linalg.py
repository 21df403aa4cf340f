"""Exact rank of sparse rational vectors."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def rank(vectors: Iterable[Mapping[Hashable, int | Fraction]]) -> int:
    """Rank over Q of vectors given as {coordinate: coefficient} dicts."""
    rows = [v for v in vectors if any(v.values())]
    if not rows:
        return 0
    keys = sorted({k for v in rows for k in v}, key=repr)
    index = {k: i for i, k in enumerate(keys)}
    dense = []
    for v in rows:
        row = [QQ(0)] * len(keys)
        for k, c in v.items():
            c = Fraction(c)
            row[index[k]] = QQ(c.numerator, c.denominator)
        dense.append(row)
    return DomainMatrix(dense, (len(dense), len(keys)), QQ).rank()
