from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubical_cumulants import suites
from cubical_cumulants.lattice import (
    CHAIN,
    COCHAIN,
    LatticeElement,
    LatticeSpec,
    PolynomialField,
    WindowOverflowError,
    boundary,
    boundary_u,
    coboundary,
    divided_difference,
    homology_rank_degree0,
    interior_product,
    pairing,
    random_element,
    random_field,
    sample_polynomial,
    shift,
    star,
    translate,
    wedge,
)
from cubical_cumulants.lattice.operators import interior_product_via_star
from cubical_cumulants.scalars import H, INF, ONE, LaurentH


def cell(spec, role, mask, center, coeff=1):
    return LatticeElement.cell(spec, role, mask, center, coeff)


# wedge


def test_wedge_of_functions_is_pointwise():
    spec = LatticeSpec(1, 1)
    f = cell(spec, COCHAIN, 0, (0,), 2) + cell(spec, COCHAIN, 0, (1,), 3)
    g = cell(spec, COCHAIN, 0, (0,), 5) + cell(spec, COCHAIN, 0, (2,), 7)
    assert wedge(f, g) == cell(spec, COCHAIN, 0, (0,), 10)


def test_wedge_signs_at_a_point():
    spec = LatticeSpec(2, 1)
    dx = cell(spec, COCHAIN, 0b01, (0, 0))
    dy = cell(spec, COCHAIN, 0b10, (0, 0))
    assert not wedge(dx, dx)
    assert wedge(dx, dy) == cell(spec, COCHAIN, 0b11, (0, 0))
    assert wedge(dy, dx) == cell(spec, COCHAIN, 0b11, (0, 0), -1)


# boundary and coboundary


def test_boundary_of_an_edge_in_one_dimension():
    spec = LatticeSpec(1, 2)
    x = cell(spec, CHAIN, 1, (3,))
    assert boundary(x) == cell(spec, CHAIN, 0, (4,)) - cell(spec, CHAIN, 0, (2,))


def test_boundary_of_points_and_coboundary_of_top_cells_vanish():
    spec = LatticeSpec(3, 1)
    assert not boundary(cell(spec, CHAIN, 0, (1, 2, 3)))
    assert not coboundary(cell(spec, COCHAIN, 0b111, (1, 2, 3)))


def test_coboundary_is_the_symmetric_difference_in_one_dimension():
    spec = LatticeSpec.window(1, 6)
    f = sample_polynomial(spec, PolynomialField(1, {0: {(2,): 1}}), COCHAIN)
    df = coboundary(f)
    for a in range(-5, 6):
        # f(x + h) - f(x - h) = 4 a h^2 at x = a h
        assert df.get(1, (a,)) == H**2 * (4 * a)
    assert df.domain == ((-5, 5),)


def test_roles_are_enforced():
    spec = LatticeSpec(1, 1)
    with pytest.raises(ValueError):
        boundary(cell(spec, COCHAIN, 1, (0,)))
    with pytest.raises(ValueError):
        coboundary(cell(spec, CHAIN, 0, (0,)))


def test_per_direction_parts_sum_to_boundary():
    rng = random.Random(5)
    spec = LatticeSpec(2, 1)
    x = random_element(rng, spec, CHAIN, 6)
    assert boundary_u(x, 0) + boundary_u(x, 1) == boundary(x)


# star


def test_star_of_the_unit_is_the_volume():
    for n in (1, 2, 3):
        spec = LatticeSpec(n, 1)
        assert star(cell(spec, COCHAIN, 0, (0,) * n)) == cell(spec, COCHAIN, (1 << n) - 1, (0,) * n)


def test_star_is_an_involution_in_three_dimensions():
    rng = random.Random(2)
    x = random_element(rng, LatticeSpec(3, 1), COCHAIN, 10)
    assert star(star(x)) == x


def test_star_squared_sign_in_two_dimensions():
    spec = LatticeSpec(2, 1)
    dx = cell(spec, COCHAIN, 0b01, (1, 1))
    assert star(star(dx)) == dx * -1


def test_cell_wedge_star_is_the_volume():
    spec = LatticeSpec(3, 1)
    for mask in range(8):
        dI = cell(spec, COCHAIN, mask, (0, 0, 0))
        assert wedge(dI, star(dI)) == cell(spec, COCHAIN, 0b111, (0, 0, 0))


# shifts, differences and the interior product


def test_shift_moves_values_forward():
    spec = LatticeSpec(1, 1)
    f = cell(spec, COCHAIN, 0, (1,))
    # (T f)(p) = f(p - 1): the value moves from 1 to 2
    assert translate(f, 0, True) == cell(spec, COCHAIN, 0, (2,))
    assert translate(translate(f, 0, True), 0, False) == f


def test_divided_differences_of_simple_samples():
    spec = LatticeSpec.window(2, 4)
    const = sample_polynomial(spec, PolynomialField(2, {0: {(0, 0): 1}}))
    assert not divided_difference(const, 0, True)
    xu = sample_polynomial(spec, PolynomialField(2, {0: {(0, 1): 1}}))
    for forward in (True, False):
        d = divided_difference(xu, 1, forward)
        assert {v for _, v in d.items()} == {ONE}
        assert len(d) == len(list(spec.points(d.domain)))


def test_interior_product_examples():
    spec = LatticeSpec(2, 1)
    assert not interior_product(cell(spec, CHAIN, 0, (0, 0), 3), 0)
    x = cell(spec, CHAIN, 0b11, (1, 0), 3)
    assert interior_product(x, 0) == cell(spec, CHAIN, 0b10, (1, 0), 3)
    assert interior_product(x, 1) == cell(spec, CHAIN, 0b01, (1, 0), -3)


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_interior_product_via_star(seed, n):
    rng = random.Random(seed)
    x = random_element(rng, LatticeSpec(n, 1), CHAIN, 6)
    for u in range(n):
        assert interior_product(x, u) == interior_product_via_star(x, u)


# sampling


def test_sampling_examples():
    spec = LatticeSpec.window(2, 4)
    one = sample_polynomial(spec, PolynomialField(2, {0: {(0, 0): 1}}))
    assert len(one) == 81 and all(v == ONE for _, v in one.items())
    x1 = sample_polynomial(spec, PolynomialField(2, {0: {(1, 0): 1}}))
    assert x1.get(0, (3, -2)) == H * 3
    numeric = sample_polynomial(spec.at_level(2), PolynomialField(2, {0: {(1, 0): 1}}))
    assert numeric.get(0, (3, -2)) == LaurentH(Fraction(3, 4))


def test_sampling_needs_a_window():
    with pytest.raises(ValueError):
        sample_polynomial(LatticeSpec(1, 1), PolynomialField(1, {0: {(1,): 1}}))


@given(st.integers(0, 10**6))
def test_neighbour_differences_are_divisible_by_h(seed):
    rng = random.Random(seed)
    spec = LatticeSpec.window(2, 3)
    f = sample_polynomial(spec, random_field(rng, 2, 4, homogeneous=False))
    for u in range(2):
        assert (translate(f, u, False) - f).valuation() >= 1


# window semantics


def test_window_overflow_is_an_error():
    spec = LatticeSpec.window(1, 2)
    f = sample_polynomial(spec, PolynomialField(1, {0: {(1,): 1}}))
    assert shift(f, 0, 4).domain == ((2, 2),)
    with pytest.raises(WindowOverflowError):
        shift(f, 0, 5)
    with pytest.raises(WindowOverflowError):
        shift(f, 0, 5) + f
    with pytest.raises(WindowOverflowError):
        LatticeElement(spec, COCHAIN, {(0, (3,)): 1}, spec.bounds)


def test_sum_intersects_domains():
    spec = LatticeSpec.window(1, 3)
    f = sample_polynomial(spec, PolynomialField(1, {0: {(0,): 1}}))
    g = translate(f, 0, True)
    assert (f + g).domain == ((-2, 3),)


# homology


@pytest.mark.parametrize("n,rank", [(1, 2), (2, 4), (3, 8)])
def test_degree_zero_homology(n, rank):
    assert homology_rank_degree0(LatticeSpec(n, 1)) == rank


def test_degree_zero_homology_at_finer_period():
    assert homology_rank_degree0(LatticeSpec(1, 2)) == 2


# identities and serialization


@given(st.integers(0, 10**6), st.sampled_from(["periodic", "window"]))
def test_operator_identities(seed, mode):
    checks = suites.lattice_suite(random.Random(seed), (1, 2, 3), 1, samples=3, mode=mode)
    assert [c["id"] for c in checks if not c["pass"]] == []


def test_pairing_of_dual_cells():
    spec = LatticeSpec(1, 1)
    f = cell(spec, COCHAIN, 1, (0,), 3)
    c = cell(spec, CHAIN, 1, (0,), 2) + cell(spec, CHAIN, 0, (0,), 5)
    assert pairing(f, c) == LaurentH(6)
    assert pairing(f, c, lambda m: 2) == LaurentH(12)


@given(st.integers(0, 10**6))
def test_json_roundtrip(seed):
    rng = random.Random(seed)
    for spec in (LatticeSpec(2, 1), LatticeSpec.window(2, 2)):
        x = random_element(rng, spec, COCHAIN, 5)
        assert LatticeSpec.from_json(spec.to_json()) == spec
        assert LatticeElement.from_json(x.to_json()) == x


def test_valuation_of_elements():
    spec = LatticeSpec(1, 1)
    assert LatticeElement.zero(spec).valuation() == INF
    x = cell(spec, COCHAIN, 0, (0,), H**2) + cell(spec, COCHAIN, 1, (1,), H**3)
    assert x.valuation() == 2
