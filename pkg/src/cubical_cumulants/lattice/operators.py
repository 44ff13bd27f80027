"""Pointwise wedge, shifts, differences, boundary, coboundary, star and contractions.

Shift convention: ``T_u f(p) = f(p - e_u)`` moves values forward along ``u``
and ``T'_u f(p) = f(p + e_u)`` moves them back.
"""

from __future__ import annotations

from ..scalars import ZERO
from .element import CHAIN, COCHAIN, LatticeElement, intersect_domains
from .spec import PERIODIC, WindowOverflowError, pm_axis, pm_pair, popcount


def _axis_check(x: LatticeElement, u: int):
    if not 0 <= u < x.spec.n:
        raise ValueError(f"direction {u} outside 0..{x.spec.n - 1}")


def wedge(x: LatticeElement, y: LatticeElement) -> LatticeElement:
    """Pointwise exterior product ``sum_{J u K = I} +-_{J,K} x(J_a) y(K_a)``."""
    x._check(y)
    dom = intersect_domains(x.domain, y.domain)
    d: dict = {}
    ydata = y._d
    for p, xrow in x._d.items():
        yrow = ydata.get(p)
        if not yrow or (dom is not None and not all(lo <= c <= hi for c, (lo, hi) in zip(p, dom))):
            continue
        out: dict = {}
        for J, a in xrow.items():
            for K, b in yrow.items():
                if J & K:
                    continue
                c = a * b
                if pm_pair(J, K) < 0:
                    c = -c
                I = J | K
                s = out.get(I)
                s = c if s is None else s + c
                if s:
                    out[I] = s
                else:
                    out.pop(I, None)
        if out:
            d[p] = out
    return x._new(d, dom)


def wedge_many(elements) -> LatticeElement:
    it = iter(elements)
    acc = next(it)
    for e in it:
        acc = wedge(acc, e)
    return acc


def shift(x: LatticeElement, u: int, steps: int) -> LatticeElement:
    """Move every value ``steps`` along axis ``u`` (``+1`` is ``T_u``)."""
    _axis_check(x, u)
    spec = x.spec
    if spec.mode == PERIODIC:
        per = spec.period
        d = {}
        for p, row in x._d.items():
            q = list(p)
            q[u] = (q[u] + steps) % per
            d[tuple(q)] = row
        return x._new(d, None)
    dom = list(x.domain)
    lo, hi = dom[u]
    wlo, whi = spec.bounds[u]
    nlo, nhi = max(lo + steps, wlo), min(hi + steps, whi)
    if nlo > nhi:
        raise WindowOverflowError(f"shift along axis {u} leaves the window")
    dom[u] = (nlo, nhi)
    d = {}
    for p, row in x._d.items():
        c = p[u] + steps
        if nlo <= c <= nhi:
            q = list(p)
            q[u] = c
            d[tuple(q)] = row
    return x._new(d, tuple(dom))


def translate(x: LatticeElement, u: int, forward: bool = True) -> LatticeElement:
    """``T_u`` when ``forward`` else ``T'_u``."""
    return shift(x, u, 1 if forward else -1)


def divided_difference(x: LatticeElement, u: int, forward: bool = True) -> LatticeElement:
    """``Delta_u = (T'_u - id)/h`` when ``forward``, else ``Delta'_u = (id - T_u)/h``."""
    inv_h = x.spec.h.inverse()
    if forward:
        return (translate(x, u, False) - x) * inv_h
    return (x - translate(x, u, True)) * inv_h


def idbar(x: LatticeElement) -> LatticeElement:
    """``(-1)^{|I|}`` on each component."""
    return x._new({p: {m: (-c if popcount(m) & 1 else c) for m, c in row.items()} for p, row in x._d.items()})


def interior_product(x: LatticeElement, u: int) -> LatticeElement:
    """``(i_u x)_I = x_{uI}``; zero when ``u`` is in ``I``."""
    _axis_check(x, u)
    bit = 1 << u
    d = {}
    for p, row in x._d.items():
        out = {}
        for m, c in row.items():
            if m & bit:
                J = m ^ bit
                out[J] = c if pm_axis(u, J) > 0 else -c
        if out:
            d[p] = out
    return x._new(d)


def du_wedge(x: LatticeElement, u: int) -> LatticeElement:
    """Left multiplication by ``du``: ``(du ^ x)_I = +-^u_I x_{I \\ u}``."""
    _axis_check(x, u)
    bit = 1 << u
    d = {}
    for p, row in x._d.items():
        out = {}
        for m, c in row.items():
            if not m & bit:
                out[m | bit] = c if pm_axis(u, m) > 0 else -c
        if out:
            d[p] = out
    return x._new(d)


def boundary_u(x: LatticeElement, u: int) -> LatticeElement:
    """``d_u = (T_u - T'_u) o i_u`` (acts on coefficients of either role)."""
    y = interior_product(x, u)
    return translate(y, u, True) - translate(y, u, False)


def coboundary_u(x: LatticeElement, u: int) -> LatticeElement:
    """``delta_u f = du ^ (T'_u f - T_u f)`` (acts on coefficients of either role)."""
    return du_wedge(translate(x, u, False) - translate(x, u, True), u)


def _require(x: LatticeElement, role: str, op: str):
    if x.role != role:
        raise ValueError(f"{op} needs a {role}, got a {x.role}")


def boundary(x: LatticeElement, u: int | None = None) -> LatticeElement:
    """Geometric boundary of a chain, or its part in direction ``u``."""
    _require(x, CHAIN, "boundary")
    if u is not None:
        return boundary_u(x, u)
    return _sum_over_axes(x, boundary_u)


def coboundary(x: LatticeElement, u: int | None = None) -> LatticeElement:
    _require(x, COCHAIN, "coboundary")
    if u is not None:
        return coboundary_u(x, u)
    return _sum_over_axes(x, coboundary_u)


def _sum_over_axes(x: LatticeElement, op) -> LatticeElement:
    acc = None
    for u in range(x.spec.n):
        term = op(x, u)
        acc = term if acc is None else acc + term
    return acc


def star(x: LatticeElement) -> LatticeElement:
    """``(*f)_I = +-_{I^c,I} f_{I^c}``."""
    full = (1 << x.spec.n) - 1
    d = {}
    for p, row in x._d.items():
        out = {}
        for m, c in row.items():
            I = full ^ m
            out[I] = c if pm_pair(m, I) > 0 else -c
        d[p] = out
    return x._new(d)


def star_bar(x: LatticeElement) -> LatticeElement:
    """``* o idbar``."""
    return star(idbar(x))


def star_inverse(x: LatticeElement) -> LatticeElement:
    """``*^{-1} = (-1)^{k(n-k)} *`` on degree ``k``."""
    n = x.spec.n
    y = star(x)
    return y._new({p: {m: (-c if (popcount(m) * (n - popcount(m))) & 1 else c) for m, c in row.items()} for p, row in y._d.items()})


def interior_product_via_star(x: LatticeElement, u: int) -> LatticeElement:
    """``i_u(x) = *(*^{-1} x ^ u)``, with the constant cell ``u`` on the right."""
    spec = x.spec
    cell_u = LatticeElement.constant(spec, x.role, 1 << u)
    if x.domain is not None:
        cell_u = cell_u.restrict(x.domain)
    return star(wedge(star_inverse(x), cell_u))


def pairing(f: LatticeElement, c: LatticeElement, weight=None):
    """``<f, c> = sum_cells f(cell) c(cell)``; ``weight(mask)`` scales each cell."""
    total = ZERO
    for p, row in c._d.items():
        frow = f._d.get(p)
        if not frow:
            continue
        for m, v in row.items():
            a = frow.get(m)
            if a:
                term = a * v
                if weight is not None:
                    term = term * weight(m)
                total = total + term
    return total
