"""The lattice chain and cochain algebras as inputs to the generic bracket routes."""

from __future__ import annotations

import random

from ..coalgebra.algebra import GradedBasisAlgebra, Vector, random_coefficient
from ..scalars import LaurentH
from .element import CHAIN, COCHAIN, LatticeElement
from .operators import boundary_u, coboundary_u, wedge
from .spec import PERIODIC, LatticeSpec, popcount

#: normalization name -> (role, base operator family, divisor as a multiple of h)
NORMALIZATIONS = {
    "delta": (COCHAIN, "delta", 0),
    "delta/2h": (COCHAIN, "delta", 2),
    "partial": (CHAIN, "partial", 0),
    "partial/2h": (CHAIN, "partial", 2),
    "partial/h": (CHAIN, "partial", 1),
}


def normalization_factor(spec: LatticeSpec, normalization: str) -> LaurentH:
    """The scalar multiplying the raw boundary or coboundary."""
    _, _, div = NORMALIZATIONS[normalization]
    if div == 0:
        return LaurentH(1)
    return (spec.h * div).inverse()


class LatticeAlgebra:
    """``(C or A, wedge, normalized differential)``, optionally one direction only."""

    def __init__(self, spec: LatticeSpec, normalization: str = "delta/2h", direction: int | None = None):
        if normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {normalization!r}")
        self.spec = spec
        self.normalization = normalization
        self.role, family, _ = NORMALIZATIONS[normalization]
        self.differential_degree = 1 if family == "delta" else -1
        self._op = coboundary_u if family == "delta" else boundary_u
        self._factor = normalization_factor(spec, normalization)
        self.direction = direction

    def zero(self) -> LatticeElement:
        return LatticeElement.zero(self.spec, self.role)

    def mul(self, x: LatticeElement, y: LatticeElement) -> LatticeElement:
        return wedge(x, y)

    def d(self, x: LatticeElement) -> LatticeElement:
        axes = range(self.spec.n) if self.direction is None else [self.direction]
        acc = None
        for u in axes:
            term = self._op(x, u)
            acc = term if acc is None else acc + term
        return acc * self._factor

    def degree_parts(self, x: LatticeElement) -> dict[int, LatticeElement]:
        return x.degree_parts()


def random_element(
    rng: random.Random, spec: LatticeSpec, role: str = COCHAIN, cells: int = 4, degree: int | None = None, allow_h: bool = True
) -> LatticeElement:
    """Random sparse element with coefficients ``+-{1,2,3} h^{-1,0,1}``."""
    pts = list(spec.points())
    masks = [m for m in range(1 << spec.n) if degree is None or popcount(m) == degree]
    data = {}
    for _ in range(cells):
        data[(rng.choice(masks), rng.choice(pts))] = random_coefficient(rng, allow_h)
    return LatticeElement(spec, role, data)


def to_basis_algebra(spec: LatticeSpec, normalization: str = "delta/2h", direction: int | None = None):
    """Finite-basis copy of a periodic lattice algebra.

    Returns ``(algebra, index)`` where ``index`` maps ``(mask, centre)`` to a
    basis position.
    """
    if spec.mode != PERIODIC:
        raise ValueError("only periodic lattices have a finite basis")
    lat = LatticeAlgebra(spec, normalization, direction)
    cells = [(m, p) for p in spec.points() for m in range(1 << spec.n)]
    index = {c: i for i, c in enumerate(cells)}
    degrees = [popcount(m) for m, _ in cells]
    products = {}
    by_point: dict = {}
    for i, (m, p) in enumerate(cells):
        by_point.setdefault(p, []).append(i)
    for p, idx in by_point.items():
        for i in idx:
            for j in idx:
                a = LatticeElement.cell(spec, lat.role, cells[i][0], p)
                b = LatticeElement.cell(spec, lat.role, cells[j][0], p)
                prod = to_vector(wedge(a, b), index)
                if prod:
                    products[(i, j)] = prod
    differential = {}
    for i, (m, p) in enumerate(cells):
        img = to_vector(lat.d(LatticeElement.cell(spec, lat.role, m, p)), index)
        if img:
            differential[i] = img
    names = [f"{m}@{p}" for m, p in cells]
    alg = GradedBasisAlgebra(degrees, products, differential, lat.differential_degree, names)
    return alg, index


def to_vector(x: LatticeElement, index: dict) -> Vector:
    return Vector((index[(c.mask, c.center)], v) for c, v in x.items())


def from_vector(v: Vector, spec: LatticeSpec, role: str, index: dict) -> LatticeElement:
    inverse = {i: c for c, i in index.items()}
    return LatticeElement(spec, role, {inverse[i]: c for i, c in v.items()})
