from hypothesis import given, settings, strategies as st

from anmirror import toric
from anmirror.errors import InvalidParameter

import pytest


def test_rays_for_n1():
    assert toric.build_fan(1).rays == ((-1, 1), (0, 1), (1, 1))


def test_cones_are_smooth():
    fan = toric.build_fan(5)
    assert all(toric.det(*fan.cone_rays(c)) == 1 for c in range(6))


def test_bad_n_rejected():
    with pytest.raises(InvalidParameter):
        toric.build_fan(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_single_ray_classes(n):
    fan = toric.build_fan(n)
    for i in range(1, n + 1):
        coeffs = tuple(int(r == i) for r in range(n + 2))
        d = toric.divisor_class(toric.TorusDivisor(coeffs), fan).degrees
        want = tuple(-2 if j == i else (1 if abs(j - i) == 1 else 0) for j in range(1, n + 1))
        assert d == want


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(-6, 6), st.integers(-6, 6))
def test_principal_divisors_have_zero_class(n, m1, m2):
    fan = toric.build_fan(n)
    D = toric.principal_divisor((m1, m2), fan)
    assert not any(toric.divisor_class(D, fan).degrees)
    assert toric.principal_character(D, fan) == (m1, m2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.integers(-4, 4), min_size=n, max_size=n)))
def test_bundle_with_degrees_roundtrip(degrees):
    fan = toric.build_fan(len(degrees))
    d = toric.DivisorClass(tuple(degrees))
    D = toric.bundle_with_degrees(d, fan)
    assert toric.divisor_class(D, fan) == d
    assert D.coefficients[-2:] == (0, 0)


def test_non_principal_divisor_detected():
    fan = toric.build_fan(2)
    assert toric.principal_character(toric.TorusDivisor((0, 1, 0, 0)), fan) is None


def test_structure_sheaf_sections_in_box():
    # sections of O are characters with |m1| <= m2
    fan = toric.build_fan(1)
    secs = toric.sections_in_box(toric.TorusDivisor((0, 0, 0)), (-4, 4, -4, 4), fan)
    assert len(secs) == sum(2 * m2 + 1 for m2 in range(5))
    assert all(abs(m1) <= m2 for m1, m2 in secs)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(-3, 3), min_size=6, max_size=6), st.integers(-4, 6))
def test_m2_range_matches_enumeration(n, coeffs, m2):
    fan = toric.build_fan(n)
    D = toric.TorusDivisor(tuple(coeffs[: n + 2] + [0] * max(0, n + 2 - len(coeffs))))
    rng = toric.section_m2_range(D, fan, m2)
    brute = sorted(m1 for m1, mm in toric.sections_in_box(D, (-40, 40, m2, m2), fan))
    if rng is None:
        assert brute == []
    else:
        assert brute == list(range(rng[0], rng[1] + 1))


def test_filtered_dims_grow_and_stabilize():
    fan = toric.build_fan(2)
    zero = toric.DivisorClass((0, 0))
    D = toric.bundle_with_degrees(zero, fan)
    dims = toric.hom_on_Yv_truncated(zero, zero, 3, toric.natural_box(D, fan, 3), fan)
    assert dims.all_stabilized
    assert list(dims.dims) == sorted(dims.dims)
    assert dims.dims[0] == len(toric.sections_in_box(D, toric.natural_box(D, fan, 3), fan))


def test_empty_box_has_no_homs():
    fan = toric.build_fan(1)
    z = toric.DivisorClass((0,))
    assert toric.hom_on_Yv_truncated(z, z, 2, None, fan).dims == (0, 0, 0)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_chart_coordinates_multiply_to_h(n):
    fan = toric.build_fan(n)
    for c in range(n + 1):
        X, Y = toric.chart_exponents(fan, c)
        assert (X[0] + Y[0], X[1] + Y[1]) == (0, 1)
        assert toric.express_in_chart(X, fan, c) == (1, 0)
        assert toric.express_in_chart(Y, fan, c) == (0, 1)
