import random

import pytest
import sympy as sp

from anmirror import syz_base
from anmirror.errors import InvalidParameter
from anmirror.syz_base import u, v, w


def test_base_has_one_wall_per_singular_point():
    data = syz_base.base_data(3)
    assert len(data.singular_points) == len(data.walls) == 4


def test_uncorrected_transitions():
    assert syz_base.uncorrected_transition("plus").images[0] == 1 / v
    assert syz_base.uncorrected_transition("minus").images[0] == w / v


def test_corrected_transitions():
    plus = syz_base.corrected_transition("plus").images[0]
    minus = syz_base.corrected_transition("minus").images[0]
    assert sp.simplify(plus - (1 + w) / v) == 0
    assert sp.simplify(minus - (1 + w) / v) == 0


def test_unknown_side():
    with pytest.raises(InvalidParameter):
        syz_base.corrected_transition("left")


def test_monodromy_uncorrected_and_corrected():
    assert sp.simplify(syz_base.monodromy(False).images[0] - u * w) == 0
    assert sp.simplify(syz_base.monodromy(True).images[0] - u) == 0
    assert sp.simplify(syz_base.monodromy(False, times=2).images[0] - u * w ** 2) == 0
    assert syz_base.monodromy_matrix() == sp.Matrix([[1, 1], [0, 1]])


def test_corrected_monodromy_numerically_trivial():
    loop = syz_base.monodromy(True, times=3)
    rng = random.Random(4)
    for _ in range(10):
        vals = {u: sp.Rational(rng.randint(1, 50), rng.randint(1, 50)),
                w: sp.Rational(rng.randint(1, 50), rng.randint(1, 50))}
        assert loop.images[0].subs(vals) == vals[u]


def test_glued_relations_n1():
    cover = syz_base.glued_cover_relations(1)
    u0, v1 = syz_base.chart_symbols(0)
    assert cover.relations == [sp.Eq(u0 * v1, 1 + w)]


def test_glued_overlap_identity_n2():
    cover = syz_base.glued_cover_relations(2)
    u0, v1 = syz_base.chart_symbols(0)
    u1, v2 = syz_base.chart_symbols(1)
    assert sp.Eq(u1 * v2, u0 * v1) in cover.relations


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cocycle(n):
    cover = syz_base.glued_cover_relations(n)
    assert cover.cocycle_checked == (n + 1) * n * (n - 1)


def test_transition_inverse_roundtrip():
    t = syz_base.glued_transition(0, 2)
    back = syz_base.glued_transition(2, 0)
    ident = back.then(t)
    assert ident.equals(syz_base.ChartMap(ident.source, ident.target, ident.source))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_charts_match_toric_resolution(n):
    match = syz_base.match_resolution_charts(n)
    assert match.ok, match.failures
    assert set(match.witness) == {"u_i", "v_(i+1)", "w"}
