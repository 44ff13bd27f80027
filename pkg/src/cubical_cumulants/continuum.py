"""Polynomial multivector fields on R^n, used as the continuum oracle.

The divergence-type operator ``(dX)_I = -sum_u d_u X_{uI}`` is the limit of
the chain boundary divided by ``2h``; its Leibniz deviation is the Schouten
bracket.  Everything is symbolic over Q (sympy polynomials).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import sympy

from .lattice.sampling import PolynomialField
from .lattice.spec import pm_axis, pm_pair, popcount


class Multivector:
    """``sum_I X_I e_I`` with polynomial coefficients ``X_I``."""

    def __init__(self, n: int, components: Mapping[int, sympy.Poly] | None = None):
        self.n = n
        self.gens = sympy.symbols(f"x1:{n + 1}")
        self.comp = {m: p for m, p in (components or {}).items() if not p.is_zero}

    @classmethod
    def from_field(cls, field: PolynomialField) -> Multivector:
        out = cls(field.n)
        comp = {}
        for mask, terms in field.terms.items():
            comp[mask] = sympy.Poly.from_dict({e: sympy.Rational(c.numerator, c.denominator) for e, c in terms.items()}, *out.gens, domain="QQ")
        out.comp = {m: p for m, p in comp.items() if not p.is_zero}
        return out

    def to_field(self) -> PolynomialField:
        terms = {}
        for m, p in self.comp.items():
            terms[m] = {e: Fraction(int(c.p), int(c.q)) for e, c in p.as_dict().items()}
        return PolynomialField(self.n, terms)

    def _zero_poly(self):
        return sympy.Poly(0, *self.gens, domain="QQ")

    def __add__(self, other: Multivector) -> Multivector:
        comp = dict(self.comp)
        for m, p in other.comp.items():
            comp[m] = comp[m] + p if m in comp else p
        return Multivector(self.n, comp)

    def __neg__(self):
        return Multivector(self.n, {m: -p for m, p in self.comp.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> Multivector:
        return Multivector(self.n, {m: p * c for m, p in self.comp.items()})

    def wedge(self, other: Multivector) -> Multivector:
        comp: dict = {}
        for J, a in self.comp.items():
            for K, b in other.comp.items():
                if J & K:
                    continue
                term = a * b if pm_pair(J, K) > 0 else -(a * b)
                I = J | K
                comp[I] = comp[I] + term if I in comp else term
        return Multivector(self.n, comp)

    def divergence(self) -> Multivector:
        """``(dX)_I = -sum_{u not in I} d_u X_{uI}``."""
        comp: dict = {}
        for m, p in self.comp.items():
            for u in range(self.n):
                if not (m >> u) & 1:
                    continue
                I = m ^ (1 << u)
                term = p.diff(self.gens[u])
                term = -term if pm_axis(u, I) > 0 else term
                comp[I] = comp[I] + term if I in comp else term
        return Multivector(self.n, comp)

    def degree_parts(self) -> dict[int, Multivector]:
        parts: dict = {}
        for m, p in self.comp.items():
            parts.setdefault(popcount(m), {})[m] = p
        return {k: Multivector(self.n, c) for k, c in parts.items()}

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        diff = self - other
        return not diff.comp

    def __bool__(self):
        return bool(self.comp)


def schouten(x: Multivector, y: Multivector) -> Multivector:
    """``d(XY) - dX.Y - (-1)^{|X|} X.dY``, extended bilinearly over degrees."""
    total = Multivector(x.n)
    for dx, xp in x.degree_parts().items():
        for _, yp in y.degree_parts().items():
            t = xp.wedge(yp).divergence() - xp.divergence().wedge(yp)
            t = t - xp.wedge(yp.divergence()) if dx % 2 == 0 else t + xp.wedge(yp.divergence())
            total = total + t
    return total


def lie_bracket(x: Multivector, y: Multivector) -> Multivector:
    """``[X, Y] = (X.grad) Y - (Y.grad) X`` for vector fields."""
    n = x.n
    comp = {}
    for w in range(n):
        acc = sympy.Poly(0, *x.gens, domain="QQ")
        for u in range(n):
            xu, yu = x.comp.get(1 << u), y.comp.get(1 << u)
            yw, xw = y.comp.get(1 << w), x.comp.get(1 << w)
            if xu is not None and yw is not None:
                acc = acc + xu * yw.diff(x.gens[u])
            if yu is not None and xw is not None:
                acc = acc - yu * xw.diff(x.gens[u])
        comp[1 << w] = acc
    return Multivector(n, comp)


def exterior_derivative(f: PolynomialField, mask: int = 0) -> PolynomialField:
    """``d(f_I dI)`` for one component: ``sum_u d_u f du ^ dI``."""
    n = f.n
    terms: dict = {}
    for u in range(n):
        if (mask >> u) & 1:
            continue
        sign = pm_axis(u, mask)
        target = terms.setdefault(mask | (1 << u), {})
        for e, c in f.derivative(mask, u).items():
            target[e] = target.get(e, Fraction(0)) + sign * c
    return PolynomialField(n, terms)
