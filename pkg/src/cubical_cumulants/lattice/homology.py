"""Exact homology ranks of the periodic lattice chain complex."""

from __future__ import annotations

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .element import CHAIN, LatticeElement
from .operators import boundary
from .spec import PERIODIC, LatticeSpec, popcount


def boundary_matrix(spec: LatticeSpec, degree: int) -> tuple[list, list, DomainMatrix]:
    """Matrix of ``d : C_degree -> C_{degree-1}`` over Q (rows are targets)."""
    if spec.mode != PERIODIC:
        raise ValueError("homology needs a periodic lattice")
    src = [(m, p) for p in spec.points() for m in range(1 << spec.n) if popcount(m) == degree]
    tgt = [(m, p) for p in spec.points() for m in range(1 << spec.n) if popcount(m) == degree - 1]
    row_of = {c: i for i, c in enumerate(tgt)}
    rows = [[QQ(0)] * len(src) for _ in tgt]
    for j, (m, p) in enumerate(src):
        image = boundary(LatticeElement.cell(spec, CHAIN, m, p))
        for cell, c in image.items():
            # the unnormalized boundary has integer coefficients
            rows[row_of[(cell.mask, cell.center)]][j] = QQ(int(c.constant_value()))
    return src, tgt, DomainMatrix(rows, (len(tgt), len(src)), QQ)


def homology_rank(spec: LatticeSpec, degree: int) -> int:
    n = spec.n
    dim = sum(1 for m in range(1 << n) if popcount(m) == degree) * spec.period**n
    rank_out = boundary_matrix(spec, degree)[2].rank() if degree > 0 else 0
    rank_in = boundary_matrix(spec, degree + 1)[2].rank() if degree < n else 0
    return dim - rank_out - rank_in


def homology_rank_degree0(spec: LatticeSpec) -> int:
    return homology_rank(spec, 0)
