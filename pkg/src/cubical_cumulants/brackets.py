"""Closed-form lattice brackets, the three-dimensional case tables and valuation sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .coalgebra.taylor import taylor_bracket_direct
from .lattice.algebra import NORMALIZATIONS, LatticeAlgebra
from .lattice.element import CHAIN, COCHAIN, LatticeElement
from .lattice.operators import (
    coboundary_u,
    divided_difference,
    idbar,
    interior_product,
    translate,
    wedge,
    wedge_many,
)
from .lattice.sampling import PolynomialField, sample_polynomial
from .lattice.spec import LatticeSpec, popcount
from .scalars import INF, LaurentH


def _delta(x, u):
    return divided_difference(x, u, True)


def _delta_back(x, u):
    return divided_difference(x, u, False)


def delta_one(x: LatticeElement, u: int) -> LatticeElement:
    """``delta_{1,u} = delta_u / 2h``."""
    return coboundary_u(x, u) * (x.spec.h * 2).inverse()


def _check_args(elements: Sequence[LatticeElement], role: str):
    if not elements:
        raise ValueError("a bracket needs at least one argument")
    for e in elements:
        if e.role != role:
            raise ValueError(f"expected {role}s, got a {e.role}")


def delta_bracket_closed(elements: Sequence[LatticeElement], u: int | None = None) -> LatticeElement:
    """``delta_{k,u} = h^{k-1} m_k sum_i (-Delta'_u idbar)^{i-1} (x) delta_{1,u} (x) Delta_u^{k-i}``.

    ``u=None`` sums over all directions.  Normalization is ``delta / 2h``.
    """
    _check_args(elements, COCHAIN)
    spec = elements[0].spec
    if u is None:
        return _sum_axes(spec, lambda v: delta_bracket_closed(elements, v))
    k = len(elements)
    back = [-_delta_back(idbar(v), u) for v in elements[:-1]]
    fwd = [_delta(v, u) for v in elements[1:]]
    acc = None
    for i in range(k):
        factors = back[:i] + [delta_one(elements[i], u)] + fwd[i:]
        term = wedge_many(factors)
        acc = term if acc is None else acc + term
    return acc * spec.h ** (k - 1)


def partial_bracket_closed(
    elements: Sequence[LatticeElement], u: int | None = None, normalization: str = "partial/2h"
) -> LatticeElement:
    """The chain brackets in split form; ``partial/h`` and ``partial`` rescale ``partial/2h``."""
    _check_args(elements, CHAIN)
    spec = elements[0].spec
    if normalization not in ("partial/2h", "partial/h", "partial"):
        raise ValueError(f"not a chain normalization: {normalization!r}")
    if u is None:
        return _sum_axes(spec, lambda v: partial_bracket_closed(elements, v, normalization))
    k = len(elements)
    fwd_bar = [_delta(idbar(v), u) for v in elements[:-1]]
    back_bar = [_delta_back(idbar(v), u) for v in elements[:-1]]
    fwd = [_delta(v, u) for v in elements[1:]]
    back = [_delta_back(v, u) for v in elements[1:]]
    acc = None
    for i in range(k):
        contracted = interior_product(elements[i], u)
        first = wedge_many(fwd_bar[:i] + [translate(contracted, u, False)] + fwd[i:])
        second = wedge_many(back_bar[:i] + [translate(contracted, u, True)] + back[i:])
        term = first + second if k % 2 == 0 else first - second
        acc = term if acc is None else acc + term
    scale = spec.h ** (k - 2) * Fraction(-1, 2)
    if normalization == "partial/h":
        scale = scale * 2
    elif normalization == "partial":
        scale = scale * spec.h * 2
    return acc * scale


def _sum_axes(spec: LatticeSpec, fn) -> LatticeElement:
    acc = None
    for v in range(spec.n):
        term = fn(v)
        acc = term if acc is None else acc + term
    return acc


def closed_bracket(normalization: str) -> Callable:
    """Closed form for a normalization, as ``fn(elements, u)``."""
    if normalization == "delta/2h":
        return delta_bracket_closed
    if normalization in ("partial/2h", "partial/h", "partial"):
        return lambda elements, u=None: partial_bracket_closed(elements, u, normalization)
    raise ValueError(f"no closed form for {normalization!r}")


# the three-dimensional case tables


def monomial_chain(f: LatticeElement, mask: int) -> LatticeElement:
    """``f . I`` for a scalar function ``f`` stored as a 0-chain."""
    if f.masks() - {0}:
        raise ValueError("f must be a 0-chain")
    cell = LatticeElement.constant(f.spec, f.role, mask)
    return wedge(f, cell)


def bracket_table_n3(
    scalars: Sequence[LatticeElement], masks: Sequence[int], u: int, k: int
) -> LatticeElement:
    """Evaluate the printed three-dimensional tables for ``[f.I, g.J]_u`` and ``[f.I, g.J, k.K]_u``.

    ``scalars`` are 0-chains, ``masks`` the cell types.  Normalization is ``partial/2h``.
    """
    if k not in (2, 3):
        raise ValueError("tables exist for k = 2 and k = 3 only")
    if len(scalars) != k or len(masks) != k:
        raise ValueError(f"need {k} scalars and {k} masks")
    spec = scalars[0].spec
    if spec.n != 3:
        raise ValueError("the tables are stated for n = 3")
    half = Fraction(1, 2)
    role = scalars[0].role
    T = lambda x: translate(x, u, True)  # noqa: E731
    Tp = lambda x: translate(x, u, False)  # noqa: E731
    D = lambda x: _delta(x, u)  # noqa: E731
    Db = lambda x: _delta_back(x, u)  # noqa: E731
    m = wedge_many
    inside = [bool(mk & (1 << u)) for mk in masks]
    cells = [LatticeElement.constant(spec, role, mk) for mk in masks]
    iu = lambda x: interior_product(x, u)  # noqa: E731

    if k == 2:
        f, g = scalars
        I, J = cells
        if inside[0] and inside[1]:
            coeff = (m([D(f) + Db(f), g]) - m([f, D(g) + Db(g)])) * half
            return m([coeff, iu(I), J])
        if inside[0] and not inside[1]:
            coeff = (m([T(f), Db(g)]) + m([Tp(f), D(g)])) * (-half)
            return m([coeff, iu(m([I, J]))])
        if inside[1] and not inside[0]:
            coeff = (m([Db(f), T(g)]) + m([D(f), Tp(g)])) * (-half)
            return m([coeff, iu(m([I, J]))])
        return LatticeElement.zero(spec, role)

    f, g, q = scalars
    I, J, K = cells
    sI, sJ = popcount(masks[0]), popcount(masks[1])
    pattern = tuple(inside)
    h_half = spec.h * half
    if pattern == (True, True, True) or pattern == (False, False, False):
        return LatticeElement.zero(spec, role)
    if pattern == (True, True, False):
        c = m([f, D(g)]) - m([g, D(f)])
        c = m([c, D(q)]) + m([m([g, Db(f)]) - m([f, Db(g)]), Db(q)])
        out = m([c, I, iu(J), K]) * (-1) ** sI
    elif pattern == (True, False, True):
        c = m([f, D(q)]) - m([q, D(f)])
        c = m([c, D(g)]) + m([m([q, Db(f)]) - m([f, Db(q)]), Db(g)])
        out = m([c, I, J, iu(K)]) * (-1) ** (sI + sJ)
    elif pattern == (False, True, True):
        c = m([q, D(g)]) - m([g, D(q)])
        c = m([c, D(f)]) + m([m([g, Db(q)]) - m([q, Db(g)]), Db(f)])
        out = m([c, I, iu(J), K]) * (-1) ** sI
    elif pattern == (True, False, False):
        c = m([T(f), Db(g), Db(q)]) - m([Tp(f), D(g), D(q)])
        out = m([c, iu(m([I, J, K]))])
    elif pattern == (False, True, False):
        c = m([Db(f), T(g), Db(q)]) - m([D(f), Tp(g), D(q)])
        out = m([c, iu(m([I, J, K]))])
    else:
        c = m([Db(f), Db(g), T(q)]) - m([D(f), D(g), Tp(q)])
        out = m([c, iu(m([I, J, K]))])
    return out * h_half


# requests and valuation sweeps


@dataclass(frozen=True)
class BracketRequest:
    k: int
    normalization: str = "delta/2h"
    direction: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    @property
    def role(self) -> str:
        return NORMALIZATIONS[self.normalization][0]

    def evaluate(self, elements: Sequence[LatticeElement], route: str = "closed") -> LatticeElement:
        if len(elements) != self.k:
            raise ValueError(f"expected {self.k} arguments")
        _check_args(elements, self.role)
        if route == "closed":
            return closed_bracket(self.normalization)(elements, self.direction)
        if route == "direct":
            alg = LatticeAlgebra(elements[0].spec, self.normalization, self.direction)
            return taylor_bracket_direct(alg, self.k)(elements)
        raise ValueError(f"unknown route {route!r}")


#: the valuation bound each normalization is expected to meet for the k-bracket
def valuation_bound(normalization: str, k: int) -> int:
    if normalization == "delta/2h":
        return k - 1
    if normalization in ("partial/2h", "partial/h"):
        return k - 2
    if normalization == "partial":
        return k - 1
    if normalization == "delta":
        return k
    raise ValueError(normalization)


def _fmt_val(v):
    return "inf" if v == INF else int(v)


def binary_qft_check(
    spec: LatticeSpec,
    normalization: str,
    k_max: int,
    samples: Sequence[PolynomialField],
    k_min: int = 2,
    route: str = "direct",
    per_direction: bool = True,
) -> list[dict]:
    """Minimum valuation of the ``k``-bracket over ``k``-tuples drawn cyclically from ``samples``.

    One entry per ``(k, u)``; ``u`` is ``"all"`` for the summed bracket.
    """
    if not spec.formal or spec.mode != "window":
        raise ValueError("valuation checks need a formal window lattice")
    role = NORMALIZATIONS[normalization][0]
    elements = [sample_polynomial(spec, s, role) for s in samples]
    if not elements:
        raise ValueError("no samples")
    directions = list(range(spec.n)) if per_direction else [None]
    report = []
    for k in range(k_min, k_max + 1):
        bound = valuation_bound(normalization, k)
        for u in directions:
            req = BracketRequest(k, normalization, u)
            best, witness = INF, None
            for start in range(len(elements)):
                args = [elements[(start + j) % len(elements)] for j in range(k)]
                v = req.evaluate(args, route).valuation()
                if v < best:
                    best, witness = v, [(start + j) % len(elements) for j in range(k)]
            report.append({
                "role": role,
                "normalization": normalization,
                "k": k,
                "u": "all" if u is None else u,
                "min_valuation": _fmt_val(best),
                "bound": bound,
                "pass": best >= bound,
                "witness": witness,
            })
    return report
