"""Polynomial coefficient fields and their samples on a lattice."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from ..scalars import LaurentH, format_rational, parse_rational
from .element import COCHAIN, LatticeElement
from .spec import PERIODIC, LatticeSpec, axes_of, mask_of


def monomials(n: int, max_degree: int):
    """Exponent tuples of total degree at most ``max_degree``."""
    return [e for e in product(range(max_degree + 1), repeat=n) if sum(e) <= max_degree]


@dataclass(frozen=True)
class PolynomialField:
    """For each cell type a polynomial in the physical coordinates ``x_1..x_n``."""

    n: int
    terms: Mapping[int, Mapping[tuple, Fraction]] = field(default_factory=dict)
    degree_bound: int | None = None

    def __post_init__(self):
        clean = {}
        for mask, poly in self.terms.items():
            p = {tuple(e): Fraction(c) for e, c in poly.items() if c}
            for e in p:
                if len(e) != self.n:
                    raise ValueError(f"exponent {e} has wrong length")
                if self.degree_bound is not None and sum(e) > self.degree_bound:
                    raise ValueError(f"monomial {e} exceeds degree bound {self.degree_bound}")
            if p:
                clean[mask] = p
        object.__setattr__(self, "terms", clean)

    @classmethod
    def scalar(cls, n: int, poly: Mapping[tuple, Fraction], mask: int = 0) -> PolynomialField:
        return cls(n, {mask: dict(poly)})

    def total_degree(self) -> int:
        return max((sum(e) for p in self.terms.values() for e in p), default=0)

    def value(self, mask: int, point) -> Fraction:
        """Exact value of ``f_I`` at a physical point."""
        total = Fraction(0)
        for e, c in self.terms.get(mask, {}).items():
            t = c
            for x, k in zip(point, e):
                t *= Fraction(x) ** k
            total += t
        return total

    def derivative(self, mask: int, axis: int) -> dict:
        out = {}
        for e, c in self.terms.get(mask, {}).items():
            if e[axis]:
                f = list(e)
                f[axis] -= 1
                out[tuple(f)] = out.get(tuple(f), Fraction(0)) + c * e[axis]
        return {e: c for e, c in out.items() if c}

    def to_json(self) -> list:
        rows = []
        for mask in sorted(self.terms):
            for e, c in sorted(self.terms[mask].items()):
                rows.append([axes_of(mask), list(e), format_rational(c)])
        return rows

    @classmethod
    def from_json(cls, n: int, rows) -> PolynomialField:
        terms: dict = {}
        for axes, e, c in rows:
            poly = terms.setdefault(mask_of(axes), {})
            poly[tuple(e)] = poly.get(tuple(e), Fraction(0)) + parse_rational(c)
        return cls(n, terms)

    @classmethod
    def load(cls, n: int, path) -> PolynomialField:
        with open(path) as fh:
            return cls.from_json(n, json.load(fh))


def sample_polynomial(spec: LatticeSpec, poly: PolynomialField, role: str = COCHAIN) -> LatticeElement:
    """Entry at ``(I, a)`` is ``f_I(a_1 h, ..., a_n h)`` as a scalar in ``h``."""
    if spec.mode == PERIODIC:
        raise ValueError("polynomials are sampled on window lattices")
    if poly.n != spec.n:
        raise ValueError("field and lattice dimensions differ")
    step = spec.step
    level = spec.level
    cells = {}
    for p in spec.points():
        for mask, terms in poly.terms.items():
            acc: dict[int, Fraction] = {}
            for e, c in terms.items():
                v = c
                for a, k in zip(p, e):
                    v *= Fraction(a * step) ** k
                deg = sum(e)
                acc[deg] = acc.get(deg, Fraction(0)) + v
            if level is None:
                val = LaurentH.from_terms(acc)
            else:
                hv = Fraction(1, 2**level)
                val = LaurentH(sum((c * hv**d for d, c in acc.items()), Fraction(0)))
            if val:
                cells[(mask, p)] = val
    return LatticeElement(spec, role, cells, spec.bounds)


def random_polynomial(rng: random.Random, n: int, max_degree: int, terms: int = 3) -> dict:
    pool = monomials(n, max_degree)
    chosen = rng.sample(pool, min(terms, len(pool)))
    return {e: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3])) for e in chosen}


def random_field(
    rng: random.Random, n: int, max_degree: int, masks=None, terms: int = 3, homogeneous: bool = True
) -> PolynomialField:
    """Random field; ``homogeneous`` keeps one cell degree so brackets stay cheap."""
    if masks is None:
        if homogeneous:
            k = rng.randint(0, n)
            masks = [m for m in range(1 << n) if bin(m).count("1") == k]
            masks = rng.sample(masks, rng.randint(1, len(masks)))
        else:
            masks = list(range(1 << n))
    return PolynomialField(n, {m: random_polynomial(rng, n, max_degree, terms) for m in masks}, max_degree)
