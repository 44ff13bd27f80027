from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubical_cumulants.coalgebra.algebra import (
    LinearMap,
    exterior_algebra,
    random_dg_algebra,
    random_grade_preserving_map,
    random_vector,
    tensor_algebra,
    tensor_map,
    tensor_vector,
)
from cubical_cumulants.lattice import CHAIN, COCHAIN, LatticeElement, LatticeSpec, PolynomialField, random_element
from cubical_cumulants.multiscale import (
    ScalePair,
    intertwine_check,
    order_two_longhand,
    scale_tower,
    sigma_composed,
    sigma_cumulant,
    sigma_divisibility_check,
    sigma_recursive,
    tensor_cumulant,
)
from cubical_cumulants.scalars import LaurentH


def cell(spec, role, mask, center, coeff=1):
    return LatticeElement.cell(spec, role, mask, center, coeff)


# crumbling and integration in one dimension


def test_crumble_generators():
    pair = ScalePair.periodic(1, 2)
    fine, coarse = pair.fine, pair.coarse
    assert pair.crumble(cell(coarse, CHAIN, 0, (0,))) == cell(fine, CHAIN, 0, (0,))
    assert pair.crumble(cell(coarse, CHAIN, 1, (1,))) == cell(fine, CHAIN, 1, (1,)) + cell(fine, CHAIN, 1, (3,))


def test_integrate_generators():
    pair = ScalePair.periodic(1, 2)
    fine, coarse = pair.fine, pair.coarse
    f = sum((cell(fine, COCHAIN, 0, (a,), a + 1) for a in range(1, 8)), cell(fine, COCHAIN, 0, (0,), 1))
    fb = pair.integrate(f)
    for c in (0, 2):
        assert fb.get(0, (c,)) == f.get(0, (2 * c,))
    g = sum((cell(fine, COCHAIN, 1, (a,), a * a + 1) for a in range(1, 8)), cell(fine, COCHAIN, 1, (0,), 1))
    gb = pair.integrate(g)
    for c in (0, 2):
        assert gb.get(1, (c,)) == (g.get(1, (2 * c,)) + g.get(1, ((2 * c - 2) % 8,))) * Fraction(1, 2)


@pytest.mark.parametrize("n", [1, 2])
def test_generator_checks(n):
    pair = ScalePair.periodic(n, 2)
    assert pair.chain_map_failures() == []
    assert pair.cochain_scaling_failures() == []
    assert pair.duality_failures() == []


def test_roles_and_lattices_are_checked():
    pair = ScalePair.periodic(1, 2)
    with pytest.raises(ValueError):
        pair.crumble(cell(pair.coarse, COCHAIN, 0, (0,)))
    with pytest.raises(ValueError):
        pair.integrate(cell(pair.coarse, COCHAIN, 0, (0,)))
    with pytest.raises(ValueError):
        ScalePair.periodic(1, 1)


def test_window_integration_shrinks_the_domain():
    pair = ScalePair.window(1, 8)
    f = LatticeElement.constant(pair.fine, COCHAIN, 1).restrict(pair.fine.bounds)
    fb = pair.integrate(f)
    assert fb.domain == ((-3, 3),)
    assert {v for _, v in fb.items()} == {LaurentH(1)}


# cumulants of a linear map


def identity_map(alg):
    return LinearMap(alg, alg, {i: alg.basis(i) for i in range(alg.dim)})


def test_low_order_cumulants():
    rng = random.Random(0)
    A = random_dg_algebra(rng, 3)
    B = random_dg_algebra(rng, 3)
    f = random_grade_preserving_map(rng, A, B)
    u, v = random_vector(rng, A, 2, True), random_vector(rng, A, 2, True)
    assert sigma_cumulant(A, B, f, 1)([u]) == f(u)
    expected = f(A.mul(u, v)) - B.mul(f(u), f(v))
    assert sigma_cumulant(A, B, f, 2)([u, v]) == expected
    assert sigma_recursive(A, B, f, 2)([u, v]) == expected


def test_cumulants_of_a_homomorphism_vanish():
    rng = random.Random(1)
    A = exterior_algebra([1, 1, 0])
    f = identity_map(A)
    for k in (2, 3, 4):
        vs = [random_vector(rng, A, 2) for _ in range(k)]
        assert not sigma_cumulant(A, A, f, k)(vs)
        assert not sigma_recursive(A, A, f, k)(vs)


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_sigma_routes_agree(seed, k):
    rng = random.Random(seed)
    A = random_dg_algebra(rng, 3)
    B = random_dg_algebra(rng, 3)
    f = random_grade_preserving_map(rng, A, B)
    vs = [random_vector(rng, A, 2) for _ in range(k)]
    a = sigma_cumulant(A, B, f, k)(vs)
    assert a == sigma_recursive(A, B, f, k)(vs)
    assert a == sigma_composed(f, k)(vs)


def _tensor_setup(rng, degrees=None):
    algs = [random_dg_algebra(rng, 2, differential_degree=1) if degrees is None else exterior_algebra(degrees) for _ in range(4)]
    V, W, Vb, Wb = algs
    return V, W, Vb, Wb, random_grade_preserving_map(rng, V, Vb), random_grade_preserving_map(rng, W, Wb)


def test_tensor_cumulant_first_order():
    rng = random.Random(2)
    V, W, Vb, Wb, fV, fW = _tensor_setup(rng)
    v, w = random_vector(rng, V, 1, True), random_vector(rng, W, 1, True)
    assert tensor_cumulant(fV, fW, [(v, w)]) == tensor_vector(fV(v), fW(w), Wb.dim)


def test_tensor_cumulant_second_order_by_hand():
    rng = random.Random(3)
    V, W, Vb, Wb, fV, fW = _tensor_setup(rng, degrees=[0, 0])
    v1, v2 = random_vector(rng, V, 2), random_vector(rng, V, 2)
    w1, w2 = random_vector(rng, W, 2), random_vector(rng, W, 2)
    s2V = sigma_cumulant(V, Vb, fV, 2)([v1, v2])
    s2W = sigma_cumulant(W, Wb, fW, 2)([w1, w2])
    expected = tensor_vector(s2V, fW(W.mul(w1, w2)), Wb.dim) + tensor_vector(Vb.mul(fV(v1), fV(v2)), s2W, Wb.dim)
    pairs = [(v1, w1), (v2, w2)]
    assert tensor_cumulant(fV, fW, pairs) == expected


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_tensor_cumulant_matches_direct(seed, k):
    rng = random.Random(seed)
    V, W, Vb, Wb, fV, fW = _tensor_setup(rng)
    pairs = [(random_vector(rng, V, 1, True), random_vector(rng, W, 1, True)) for _ in range(k)]
    direct = sigma_cumulant(tensor_algebra(V, W), tensor_algebra(Vb, Wb), tensor_map(fV, fW), k)
    assert tensor_cumulant(fV, fW, pairs) == direct([tensor_vector(v, w, W.dim) for v, w in pairs])


# divisibility


def test_binary_cumulant_of_linear_cochains():
    pair = ScalePair.window(1, 8)
    samples = [PolynomialField(1, {0: {(1,): 1}}), PolynomialField(1, {0: {(1,): 2, (0,): 1}})]
    rows = sigma_divisibility_check(pair, 2, samples)
    assert rows[0]["pass"]
    assert rows[0]["min_valuation"] == "inf" or rows[0]["min_valuation"] >= 1


def test_cumulants_of_constants_vanish():
    pair = ScalePair.window(1, 8)
    samples = [PolynomialField(1, {0: {(0,): 3}}), PolynomialField(1, {1: {(0,): 2}})]
    rows = sigma_divisibility_check(pair, 3, samples)
    assert [r["min_valuation"] for r in rows] == ["inf", "inf"]


def test_ternary_cumulant_of_products_of_linear_fields():
    pair = ScalePair.window(2, 8)
    samples = [
        PolynomialField(2, {0: {(1, 1): 1}}),
        PolynomialField(2, {0: {(2, 0): 1, (0, 1): 1}, 0b01: {(0, 1): 1}}),
        PolynomialField(2, {0: {(1, 0): 2}, 0b10: {(1, 1): 1}}),
    ]
    rows = sigma_divisibility_check(pair, 3, samples, k_min=3)
    assert rows[0]["min_valuation"] == "inf" or rows[0]["min_valuation"] >= 2
    assert rows[0]["point_components_vanish"]


def test_chain_side_is_recorded_not_asserted():
    pair = ScalePair.window(1, 8)
    rows = sigma_divisibility_check(pair, 2, [PolynomialField(1, {1: {(1,): 1}})] * 2, "chain")
    assert rows[0]["asserted"] is False and "pass" not in rows[0]


def test_divisibility_needs_formal_windows():
    with pytest.raises(ValueError):
        sigma_divisibility_check(ScalePair.periodic(1, 2), 2, [])


# intertwining


def test_intertwining_through_order_three():
    rows = intertwine_check(ScalePair.periodic(1, 2), 3, random.Random(0), trials=1, cells=12)
    assert [(r["order"], r["form"]) for r in rows] == [(1, "taylor"), (2, "taylor"), (3, "taylor"), (2, "longhand")]
    assert all(r["pass"] for r in rows)


def test_order_two_longhand_identity():
    pair = ScalePair.periodic(1, 2)
    rng = random.Random(4)
    v, w = (random_element(rng, pair.fine, COCHAIN, 12) for _ in range(2))
    assert not order_two_longhand(pair, v, w)


# towers


def test_two_level_cochain_tower():
    out = scale_tower([1, 0], COCHAIN, n=1)
    assert out["pass"] and out["composed"]


def test_three_level_chain_tower():
    out = scale_tower([2, 1, 0], CHAIN, n=1)
    assert out["pass"] and out["composed"]
    assert all(p["chain_map"] for p in out["pairs"])


def test_three_level_cochain_tower_composes_scalings():
    out = scale_tower([2, 1, 0], COCHAIN, n=1, order_max=1)
    assert out["composed"] and out["pass"]


def test_tower_levels_must_be_consecutive():
    with pytest.raises(ValueError):
        scale_tower([3, 1])
