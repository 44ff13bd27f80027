from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
import sympy

from cubical_cumulants.continuum import Multivector, exterior_derivative, lie_bracket, schouten
from cubical_cumulants.convergence import convergence_study, fit_rates, rate_ok
from cubical_cumulants.lattice import PolynomialField, random_field


def field(n, terms):
    return PolynomialField(n, terms)


def test_divergence_of_a_vector_field():
    # X = x1^2 e1 + x1 x2 e2  ->  dX = -(2 x1 + x1)
    X = Multivector.from_field(field(2, {0b01: {(2, 0): 1}, 0b10: {(1, 1): 1}}))
    assert X.divergence().to_field() == field(2, {0: {(1, 0): -3}})


def test_exterior_derivative_of_a_function():
    f = field(2, {0: {(2, 1): 1}})
    assert exterior_derivative(f) == field(2, {0b01: {(1, 1): 2}, 0b10: {(2, 0): 1}})


def test_schouten_of_functions_vanishes():
    f = Multivector.from_field(field(2, {0: {(2, 1): 1}}))
    g = Multivector.from_field(field(2, {0: {(0, 3): 2}}))
    assert not schouten(f, g)


def test_schouten_on_vector_fields_is_minus_the_lie_bracket():
    rng = random.Random(0)
    for _ in range(5):
        X = Multivector.from_field(random_field(rng, 3, 3, masks=[1, 2, 4]))
        Y = Multivector.from_field(random_field(rng, 3, 3, masks=[1, 2, 4]))
        assert schouten(X, Y) == -lie_bracket(X, Y)


def test_lie_bracket_example():
    # [x2 d1, x1 d2] = x2 d2 - x1 d1
    X = Multivector.from_field(field(2, {0b01: {(0, 1): 1}}))
    Y = Multivector.from_field(field(2, {0b10: {(1, 0): 1}}))
    assert lie_bracket(X, Y).to_field() == field(2, {0b10: {(0, 1): 1}, 0b01: {(1, 0): -1}})


def test_schouten_symmetry():
    rng = random.Random(1)
    X = Multivector.from_field(random_field(rng, 2, 2, masks=[1, 2]))
    Y = Multivector.from_field(random_field(rng, 2, 2, masks=[1, 2]))
    P = Multivector.from_field(random_field(rng, 2, 2, masks=[3]))
    # from the definition and XY = (-1)^{|X||Y|} YX: [X, Y] = (-1)^{|X||Y|} [Y, X]
    assert schouten(X, Y) == -schouten(Y, X)
    assert schouten(X, P) == schouten(P, X)


def test_multivector_uses_sympy_polynomials():
    X = Multivector.from_field(field(1, {1: {(2,): Fraction(1, 3)}}))
    assert isinstance(X.comp[1], sympy.Poly)


# rates


def test_fit_rates():
    rates = fit_rates([Fraction(1), Fraction(1, 2), Fraction(1, 8), Fraction(0), Fraction(0)])
    assert rates[:2] == [1.0, 2.0]
    assert rates[2] == math.inf and rates[3] is None
    assert rate_ok([0.95, None, math.inf])
    assert not rate_ok([0.85])


def constant_fields(n):
    const = field(n, {0: {(0,) * n: 2}})
    return {"f": const, "g": const, "form": const, "chains": [field(n, {m: {(0,) * n: 1}}) for m in (1, 0, 1)]}


def test_constant_fields_have_zero_error():
    out = convergence_study(1, [3, 4, 5], fields=constant_fields(1))
    for row in out.values():
        assert row["norms_exact"] == ["0/1"] * 3
        assert row["pass"]


def test_centred_difference_is_exact_on_quadratics():
    fields = constant_fields(2)
    fields["form"] = field(2, {0: {(2, 0): 1}})
    out = convergence_study(2, [3, 4, 5], fields=fields)
    assert out["delta1_vs_d"]["norms_exact"] == ["0/1"] * 3


def test_binary_bracket_of_linear_functions_decays():
    fields = constant_fields(1)
    fields["f"] = field(1, {0: {(1,): 1}})
    fields["g"] = field(1, {0: {(1,): 2, (0,): 1}})
    out = convergence_study(1, [3, 4, 5], fields=fields)
    assert out["delta2"]["pass"]


def test_study_on_random_cubic_fields():
    out = convergence_study(1, [3, 4, 5, 6], degree=3, seed=2)
    for name, row in out.items():
        assert row["pass"], name
        assert all(r is None or r == "inf" or r >= 0.9 for r in row["rates"])


def test_study_needs_three_levels():
    with pytest.raises(ValueError):
        convergence_study(1, [3, 4])
