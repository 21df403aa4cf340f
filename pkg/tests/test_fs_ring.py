from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from anmirror import fs_ring
from anmirror.errors import PerturbationError
from anmirror.fs_ring import Gen, Monomial


def expected_count(i, j, k, n):
    return (j - i + k * (n + 1)) // n + 1 if j - i + k * (n + 1) >= 0 else 0


def test_critical_data_n1():
    data = fs_ring.critical_data(1)
    pts = sorted(data.critical_point(i) for i in range(2))
    vals = sorted(data.critical_value(i) for i in range(2))
    assert pts == [-1, 1]
    assert vals == [-2, 2]


def test_unwrapped_first_thimble_is_flat():
    lift = fs_ring.thimble_lift(0, 0, 3, F(1, 1000))
    assert lift.anchors == (0, 0, 0)


@pytest.mark.parametrize("i,k", [(1, 1), (0, 1)])
def test_two_intersections_n2(i, k):
    eps = fs_ring.default_epsilon(2, 1)
    A = fs_ring.ThimbleLift(i, k, 2, eps, 1)
    B = fs_ring.ThimbleLift(0, 0, 2, eps, 0)
    assert len(fs_ring.intersections(A, B)) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, n), st.integers(0, n), st.integers(0, 4))))
def test_count_law(args):
    n, i, j, k = args
    eps = fs_ring.default_epsilon(n, 4)
    A = fs_ring.ThimbleLift(i, k, n, eps, 1)
    B = fs_ring.ThimbleLift(j, 0, n, eps, 0)
    pts = fs_ring.intersections(A, B)
    assert len(pts) == expected_count(i, j, k, n)
    assert len(pts) == fs_ring.GradedHomPiece(i, j, k, n).dimension


def test_labels_are_a_bijection():
    eps = fs_ring.default_epsilon(3, 2)
    A = fs_ring.ThimbleLift(1, 2, 3, eps, 1)
    B = fs_ring.ThimbleLift(2, 0, 3, eps, 0)
    labels = fs_ring.label_generators(A, B)
    assert sorted(labels.values()) == sorted(fs_ring.monomial_basis(fs_ring.hom_degree(1, 2, 2, 3), 3))


def test_epsilon_too_large():
    with pytest.raises(PerturbationError):
        fs_ring.thimble_lift(0, 1, 2, fs_ring.epsilon_bound(2, 1), level=1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dual_cycles(n):
    for i in range(n + 1):
        for j in range(1, n + 1):
            assert fs_ring.dual_cycle_pairing(i, j, n) == int(i == j)


def test_monomial_helpers():
    assert fs_ring.ord_(Monomial(3, 1)) == 1
    assert str(Monomial(2, 1)) == "x^2*y"
    assert [str(m) for m in fs_ring.monomial_basis(2, 1)] == ["x^2", "x*y", "y^2"]


def test_identity_is_a_unit():
    eps = fs_ring.default_epsilon(2, 1)
    x = Gen(0, 1, 1, 1)
    assert fs_ring.geometric_product(fs_ring.identity_gen(1), x, 2, eps).output == x
    assert fs_ring.geometric_product(x, fs_ring.identity_gen(0), 2, eps).output == x


def test_triangle_entirely_on_one_side_has_no_marks():
    eps = fs_ring.default_epsilon(1, 1)
    # both inputs and output are pure powers of x
    rec = fs_ring.geometric_product(Gen(0, 1, 0, 0), Gen(1, 0, 1, 0), 1, eps)
    assert fs_ring.gen_monomial(rec.output, 1) == Monomial(2, 0)
    assert rec.s0 == 0


def test_marked_points_example():
    eps = fs_ring.default_epsilon(1, 1)
    # y at twist 1 from 1 to 0, composed after x from 0 to 1: output x y
    rec = fs_ring.geometric_product(Gen(1, 0, 1, 1), Gen(0, 1, 0, 0), 1, eps)
    assert fs_ring.gen_monomial(rec.output, 1) == Monomial(1, 1)
    assert rec.s0 == 1


@pytest.mark.parametrize("n", [1, 2])
def test_ring_isomorphism_small(n):
    rep = fs_ring.verify_ring_isom(n, 2)
    assert rep.ok
    assert rep.degree_mismatches == [] and rep.min_matches > 0
    assert rep.max_matches < rep.max_cases


def test_associativity_n1():
    table, _ = fs_ring.ring_A_structure(1, 2)
    assert fs_ring.check_associativity(table) == []


def test_continuation_is_multiplication_by_s():
    eps = fs_ring.default_epsilon(2, 3)
    for g in fs_ring.geometric_generators(0, 2, 1, 2, eps):
        assert fs_ring.geometric_continuation(g, 2, eps) == fs_ring.multiply_by_s(g, 2)
