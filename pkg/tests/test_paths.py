import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from anmirror import paths
from anmirror.errors import DegenerateCrossing, InvalidInput, InvalidParameter


def test_straight_ray_n1():
    a = (1, 2)
    ray = paths.PLPath.from_pairs([(F(-1, 8), 0), (-8, 0)])
    assert paths.is_admissible(ray, a)
    assert paths.is_strongly_admissible(ray)
    assert paths.winding_by_crossings(ray, a) == (0,)
    assert paths.syz_transform(ray, a).degrees == (0,)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gamma0_gives_trivial_bundle(n):
    a = tuple(range(1, n + 2))
    assert paths.syz_transform(paths.gamma0(a), a).degrees == (0,) * n


def test_one_turn_n1():
    a = (1, 2)
    path = paths.path_with_winding(a, (1,))
    assert paths.syz_transform(path, a).degrees == (-1,)


def test_loop_n2_degrees():
    a = (1, 2, 3)
    path = paths.path_with_winding(a, (1, -1))
    assert paths.winding_by_crossings(path, a) == (1, -1)
    assert paths.syz_transform(path, a).degrees == (-1, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.integers(-2, 2), min_size=n, max_size=n)))
def test_path_with_winding_roundtrip(winding):
    a = tuple(range(1, len(winding) + 2))
    path = paths.path_with_winding(a, winding)
    assert paths.is_strongly_admissible(path)
    assert paths.is_admissible(path, a)
    assert paths.winding_by_lift(path, a) == tuple(winding)
    assert paths.winding_by_crossings(path, a) == tuple(winding)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6))
def test_random_paths_two_algorithms_agree(n, seed):
    rng = random.Random(seed)
    a = tuple(F(2) ** i for i in range(n + 1))
    path = paths.random_strongly_admissible_path(a, rng, steps_per_annulus=20)
    assert paths.winding_by_crossings(path, a) == paths.winding_by_lift(path, a)
    norm = paths.normalize_path(path, a)
    assert paths.winding_by_crossings(norm, a) == paths.winding_by_crossings(path, a)


def test_path_through_puncture_is_degenerate():
    a = (1, 2)
    bad = paths.PLPath.from_pairs([(F(-1, 2), 0), (F(1, 2), F(1, 2)), (F(3, 2), F(-1, 2)), (-5, 5)])
    with pytest.raises(DegenerateCrossing):
        paths.crossing_events(bad, a)


def test_vertex_on_segment_is_degenerate():
    a = (1, 3)
    bad = paths.PLPath.from_pairs([(F(-1, 2), 0), (0, 1), (2, 0), (2, -1), (-9, -1)])
    with pytest.raises(DegenerateCrossing):
        paths.crossing_events(bad, a)


def test_path_must_reach_the_outside():
    a = (1, 2)
    short = paths.PLPath.from_pairs([(F(-1, 4), 0), (F(-3, 2), 0)])
    assert not paths.is_admissible(short, a)


def test_self_intersecting_path_rejected():
    a = (1, 2)
    loop = paths.PLPath.from_pairs([(F(-1, 2), 0), (-3, 0), (-3, 1), (-2, -1), (-10, -1)])
    assert not paths.is_strongly_admissible(loop)
    adm = paths.is_admissible(loop, a)
    assert not adm and adm.reason


def test_coincident_vertices_rejected():
    with pytest.raises(InvalidInput):
        paths.winding_by_crossings(paths.PLPath.from_pairs([(-1, 0), (-1, 0), (-5, 0)]), (1, 2))


def test_bad_punctures():
    with pytest.raises(InvalidParameter):
        paths.as_punctures((2, 1))
    with pytest.raises(InvalidParameter):
        paths.as_punctures((0, 1))


def test_crossing_counts_are_signed():
    a = (1, 2)
    # goes up through (1, 2) and then back down through it
    path = paths.PLPath.from_pairs([(F(-1, 2), 0), (F(3, 2), -1), (F(3, 2), 1), (F(7, 4), 1),
                                    (F(7, 4), -1), (-10, -2)])
    events = paths.crossing_events(path, a)
    assert sorted(e[2] for e in events) == [-1, 1]
    assert paths.winding_by_crossings(path, a) == (0,)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_section_checks(n):
    a = tuple(range(1, n + 2))
    rep = paths.check_section(a)
    assert rep.max_residency <= 1e-12
    assert rep.max_projection_error <= 1e-12
    assert rep.max_pullback <= 1e-6
