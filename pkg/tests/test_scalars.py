from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubical_cumulants.scalars import (
    H,
    INF,
    ONE,
    ZERO,
    LaurentH,
    divide_by_h_power,
    evaluate_at_scale,
    format_rational,
    parse_rational,
    valuation,
)


def laurent(terms):
    return LaurentH.from_terms(terms)


def test_valuation_examples():
    assert valuation(ZERO) == INF
    assert valuation(laurent({2: 3, 3: -1})) == 2
    assert valuation(H.inverse() * (H**2 + H**3)) == 1


def test_evaluate_examples():
    assert evaluate_at_scale(H, 1) == Fraction(1, 2)
    assert evaluate_at_scale(H.inverse(), 2) == 4
    assert evaluate_at_scale(ONE + H**2 * 2, 1) == Fraction(3, 2)


def test_divide_examples():
    assert divide_by_h_power(H**3, 2) == H
    assert divide_by_h_power(ZERO, 5) == ZERO
    assert divide_by_h_power(H * 2 - H**2, 1) == LaurentH(2) - H


def test_rational_text():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational(" 7 ") == 7
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    with pytest.raises(ValueError):
        parse_rational("1.5")


def test_inverse_needs_monomial():
    assert (H * 2).inverse() == H.inverse() * Fraction(1, 2)
    with pytest.raises((ValueError, ZeroDivisionError)):
        (ONE + H).inverse()


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
elements = st.dictionaries(st.integers(-3, 4), coeffs, max_size=4).map(laurent)


@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(elements, elements)
def test_valuation_of_product(a, b):
    if a and b:
        assert valuation(a * b) == valuation(a) + valuation(b)
    assert valuation(a + b) >= min(valuation(a), valuation(b))


@given(elements, st.integers(0, 6))
def test_evaluation_is_a_homomorphism(a, level):
    b = a * a + H
    assert evaluate_at_scale(b, level) == evaluate_at_scale(a, level) ** 2 + Fraction(1, 2**level)


@given(elements)
def test_json_roundtrip(a):
    assert LaurentH.from_json(a.to_json()) == a
    assert hash(LaurentH.from_json(a.to_json())) == hash(a)
