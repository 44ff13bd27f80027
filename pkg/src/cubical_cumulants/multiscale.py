"""Maps between a lattice and its doubled sublattice, and the cumulants they induce."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .coalgebra.algebra import Algebra, GradedBasisAlgebra, LinearMap, Vector, multilinear
from .coalgebra.combinatorics import canonical_set_partitions, cumulant_weight, koszul_sign, reorder_sign, subset_sign
from .coalgebra.symmetric import SymElement, tau, tau_inv, tau1, wedge_vectors
from .coalgebra.taylor import taylor_bracket_direct
from .lattice.algebra import LatticeAlgebra, random_element, to_basis_algebra, to_vector
from .lattice.element import CHAIN, COCHAIN, LatticeElement, intersect_domains
from .lattice.operators import boundary, coboundary, pairing
from .lattice.sampling import PolynomialField, sample_polynomial
from .lattice.spec import PERIODIC, LatticeSpec, WindowOverflowError, popcount
from .scalars import INF, ZERO, LaurentH

HALF = Fraction(1, 2)


def _fine_targets(c: int, in_type: bool) -> tuple[int, ...]:
    """Fine coordinates (fine units) covered by coarse coordinate ``c`` on one axis."""
    a = 2 * c
    if c % 2 == 0:
        return (a, a - 2) if in_type else (a,)
    return (a - 1, a + 1) if in_type else (a - 1,)


def _support(mask: int, center: tuple) -> list[tuple]:
    per_axis = [_fine_targets(c, bool((mask >> u) & 1)) for u, c in enumerate(center)]
    return list(product(*per_axis))


@dataclass(frozen=True)
class ScalePair:
    """A fine lattice and its coarse sublattice of even vertices."""

    fine: LatticeSpec
    coarse: LatticeSpec = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "coarse", self.fine.coarse())

    @classmethod
    def periodic(cls, n: int, N: int = 2) -> ScalePair:
        return cls(LatticeSpec(n, N))

    @classmethod
    def window(cls, n: int, radius: int = 8) -> ScalePair:
        return cls(LatticeSpec.window(n, radius))

    def check(self, x: LatticeElement, side: str):
        spec = self.fine if side == "fine" else self.coarse
        if x.spec != spec:
            raise ValueError(f"element is not on the {side} lattice")

    # crumbling and integration

    def crumble(self, x: LatticeElement) -> LatticeElement:
        """``iota``: coarse chain to fine chain, the one-dimensional rule tensored."""
        self.check(x, "coarse")
        if x.role != CHAIN:
            raise ValueError("crumbling acts on chains")
        fine = self.fine
        cells: dict = {}
        domain = None
        if fine.mode != PERIODIC:
            domain = tuple((2 * lo, 2 * hi - 1) for lo, hi in x.domain)
            domain = intersect_domains(fine.bounds, domain)
        for cell, c in x.items():
            for a in _support(cell.mask, cell.center):
                a = fine.normalize(a)
                if domain is not None and not all(lo <= t <= hi for t, (lo, hi) in zip(a, domain)):
                    continue
                key = (cell.mask, a)
                cells[key] = cells.get(key, ZERO) + c
        return LatticeElement(fine, CHAIN, cells, domain)

    def integrate(self, f: LatticeElement) -> LatticeElement:
        """``bar``: fine cochain to coarse cochain, averaging with weight 1/2 per spanned axis."""
        self.check(f, "fine")
        if f.role != COCHAIN:
            raise ValueError("integration acts on cochains")
        coarse = self.coarse
        domain = None
        if coarse.mode != PERIODIC:
            domain = tuple((-((-(lo + 2)) // 2), (hi - 1) // 2) for lo, hi in f.domain)
            domain = intersect_domains(coarse.bounds, domain)
        cells = {}
        masks = f.masks()
        for p in coarse.points(domain):
            for m in masks:
                total = ZERO
                for a in _support(m, p):
                    v = f.get(m, a)
                    if v:
                        total = total + v
                if total:
                    cells[(m, p)] = total * HALF ** popcount(m)
        return LatticeElement(coarse, COCHAIN, cells, domain)

    def coarse_weight(self, mask: int) -> int:
        """Ratio of coarse to fine cell volume, used in the duality pairing."""
        return 2 ** popcount(mask)

    # checks on full generator bases (periodic)

    def _require_periodic(self):
        if self.fine.mode != PERIODIC:
            raise ValueError("generator-basis checks need periodic lattices")

    def chain_map_failures(self) -> list:
        self._require_periodic()
        bad = []
        for cell in self.coarse.cells():
            x = LatticeElement.cell(self.coarse, CHAIN, cell.mask, cell.center)
            if self.crumble(boundary(x)) != boundary(self.crumble(x)):
                bad.append(cell)
        return bad

    def cochain_scaling_failures(self) -> list:
        """Generators ``f`` with ``1/2 delta-bar(bar f) != bar(delta f)``."""
        self._require_periodic()
        bad = []
        for cell in self.fine.cells():
            f = LatticeElement.cell(self.fine, COCHAIN, cell.mask, cell.center)
            if coboundary(self.integrate(f)) * HALF != self.integrate(coboundary(f)):
                bad.append(cell)
        return bad

    def duality_failures(self) -> list:
        """Generator pairs with ``<bar f, c>_weighted != <f, iota c>``."""
        self._require_periodic()
        images = {}
        for cell in self.coarse.cells():
            images[cell] = self.crumble(LatticeElement.cell(self.coarse, CHAIN, cell.mask, cell.center))
        bad = []
        for fc in self.fine.cells():
            f = LatticeElement.cell(self.fine, COCHAIN, fc.mask, fc.center)
            fb = self.integrate(f)
            for cc, img in images.items():
                c = LatticeElement.cell(self.coarse, CHAIN, cc.mask, cc.center)
                lhs = pairing(fb, c, self.coarse_weight)
                rhs = pairing(f, img)
                if lhs != rhs:
                    bad.append((fc, cc))
        return bad

    # algebras

    def cochain_algebras(self) -> tuple[LatticeAlgebra, LatticeAlgebra]:
        return LatticeAlgebra(self.fine, "delta/2h"), LatticeAlgebra(self.coarse, "delta/2h")

    def chain_algebras(self) -> tuple[LatticeAlgebra, LatticeAlgebra]:
        return LatticeAlgebra(self.coarse, "partial"), LatticeAlgebra(self.fine, "partial")

    def basis_bar_map(self) -> LinearMap:
        """``bar`` as a map between the finite-basis cochain algebras."""
        self._require_periodic()
        src, sidx = to_basis_algebra(self.fine, "delta/2h")
        tgt, tidx = to_basis_algebra(self.coarse, "delta/2h")
        images = {}
        for (m, p), i in sidx.items():
            img = to_vector(self.integrate(LatticeElement.cell(self.fine, COCHAIN, m, p)), tidx)
            if img:
                images[i] = img
        return LinearMap(src, tgt, images)


# commutative cumulants of a linear map


def _ordered_product(alg: Algebra, elems: Sequence):
    out = elems[0]
    for e in elems[1:]:
        out = alg.mul(out, e)
    return out


def _sigma_homogeneous(source: Algebra, target: Algebra, barmap: Callable, elems: list, degrees: list[int]):
    k = len(elems)
    total = target.zero()
    for blocks in canonical_set_partitions(k):
        r = len(blocks)
        images = [barmap(_ordered_product(source, [elems[i] for i in b])) for b in blocks]
        if any(not im for im in images):
            continue
        term = _ordered_product(target, images)
        if not term:
            continue
        coeff = cumulant_weight(r) * reorder_sign(blocks, degrees)
        total = total + term * coeff
    return total


def sigma_cumulant(source: Algebra, target: Algebra, barmap: Callable, k: int) -> Callable[[Sequence], object]:
    """``sigma_k`` as a sum over unordered partitions with weights ``(-1)^{r-1}(r-1)!``."""
    if k < 1:
        raise ValueError("k must be at least 1")

    def sigma(vectors: Sequence):
        if len(vectors) != k:
            raise ValueError(f"expected {k} arguments")
        return multilinear(
            source.degree_parts,
            lambda e, d: _sigma_homogeneous(source, target, barmap, e, d),
            vectors,
            target.zero(),
        )

    return sigma


def _sigma_recursive_homogeneous(source, target, barmap, elems, degrees):
    k = len(elems)
    if k == 1:
        return barmap(elems[0])
    u, v, w = elems[0], elems[1], elems[2:]
    du, dv, dw = degrees[0], degrees[1], degrees[2:]
    first = _sigma_recursive_homogeneous(source, target, barmap, [source.mul(u, v)] + w, [du + dv] + dw)
    total = first
    m = len(w)
    for r in range(m + 1):
        for J in combinations(range(m), r):
            Jc = [i for i in range(m) if i not in J]
            # reorder v, w  ->  w_J, v, w_{J^c}
            perm = [1 + j for j in J] + [0] + [1 + j for j in Jc]
            sign = koszul_sign(perm, [dv] + dw)
            left = _sigma_recursive_homogeneous(source, target, barmap, [u] + [w[j] for j in J], [du] + [dw[j] for j in J])
            right = _sigma_recursive_homogeneous(source, target, barmap, [v] + [w[j] for j in Jc], [dv] + [dw[j] for j in Jc])
            if not left or not right:
                continue
            term = target.mul(left, right)
            total = total - term * sign
    return total


def sigma_recursive(source: Algebra, target: Algebra, barmap: Callable, k: int) -> Callable[[Sequence], object]:
    """``sigma_k`` through the recursion splitting off the first two arguments."""
    if k < 1:
        raise ValueError("k must be at least 1")

    def sigma(vectors: Sequence):
        if len(vectors) != k:
            raise ValueError(f"expected {k} arguments")
        return multilinear(
            source.degree_parts,
            lambda e, d: _sigma_recursive_homogeneous(source, target, barmap, e, d),
            vectors,
            target.zero(),
        )

    return sigma


def sym_map(source: GradedBasisAlgebra, target: GradedBasisAlgebra, f: LinearMap, x: SymElement) -> SymElement:
    """``S(f)``: apply ``f`` to every letter."""
    acc = SymElement()
    for w, c in x.items():
        acc = acc + wedge_vectors(target, [f(source.basis(i)) for i in w]) * c
    return acc


def sigma_coalgebra(f: LinearMap, x: SymElement) -> SymElement:
    """``sigma = tau-bar^{-1} o S(bar) o tau``."""
    return tau_inv(f.target, sym_map(f.source, f.target, f, tau(f.source, x)))


def sigma_composed(f: LinearMap, k: int) -> Callable[[Sequence[Vector]], Vector]:
    """Taylor coefficient ``p_1 o sigma`` on ``S^k V``."""

    def sigma(vectors: Sequence[Vector]) -> Vector:
        if len(vectors) != k:
            raise ValueError(f"expected {k} arguments")
        return sigma_coalgebra(f, wedge_vectors(f.source, vectors)).p1()

    return sigma


def check_grading(f: LinearMap):
    bad = f.grading_violations()
    if bad:
        raise ValueError(f"map does not preserve grading on basis elements {bad}")


def tensor_cumulant(fV: LinearMap, fW: LinearMap, pairs: Sequence[tuple[Vector, Vector]]) -> Vector:
    """Cumulant of ``fV (x) fW`` on ``(v_1 (x) w_1) ^ ... ^ (v_k (x) w_k)`` via the partition formula.

    Each ``v_i`` and ``w_i`` must be homogeneous.
    """
    V, W, Vb, Wb = fV.source, fW.source, fV.target, fW.target
    k = len(pairs)
    vs = [p[0] for p in pairs]
    ws = [p[1] for p in pairs]
    for x, alg in [(v, V) for v in vs] + [(w, W) for w in ws]:
        if not alg.is_homogeneous(x):
            raise ValueError("tensor_cumulant needs homogeneous factors")
    dv = [_deg(V, v) for v in vs]
    dw = [_deg(W, w) for w in ws]
    interleaved = [d for pair in zip(dv, dw) for d in pair]
    total = Vector()
    for blocks in canonical_set_partitions(k):
        r = len(blocks)
        # v_1 w_1 ... v_k w_k  ->  v_{I_1} .. v_{I_r} w_{I_1} .. w_{I_r}
        perm = [2 * i for b in blocks for i in b] + [2 * i + 1 for b in blocks for i in b]
        sign = koszul_sign(perm, interleaved)
        left = None
        for b in blocks:
            s = sigma_cumulant(V, Vb, fV, len(b))([vs[i] for i in b])
            left = s if left is None else Vb.mul(left, s)
        if not left:
            continue
        w_products = [_ordered_product(W, [ws[i] for i in b]) for b in blocks]
        right = sigma_cumulant(W, Wb, fW, r)(w_products)
        if not right:
            continue
        total = total + _tensor(left, right, Wb.dim) * sign
    return total


def _tensor(x: Vector, y: Vector, b_dim: int) -> Vector:
    return Vector((i * b_dim + j, ci * cj) for i, ci in x.items() for j, cj in y.items())


def _deg(alg: GradedBasisAlgebra, x: Vector) -> int:
    return next((alg.degrees[i] for i in x.keys()), 0)


# divisibility of the cumulants of bar and iota


def _fmt(v):
    return "inf" if v == INF else int(v)


def sigma_divisibility_check(
    pair: ScalePair, k_max: int, samples: Sequence[PolynomialField], side: str = "cochain", k_min: int = 2
) -> list[dict]:
    """Minimum valuation of ``sigma_k`` over cyclic ``k``-tuples of sampled elements.

    Cochains (``bar``) assert ``>= k - 1`` and vanishing point components;
    chains (``iota``) record the observed minimum only.
    """
    if not pair.fine.formal or pair.fine.mode == PERIODIC:
        raise ValueError("divisibility checks need formal window lattices")
    if side == "cochain":
        src, tgt = pair.cochain_algebras()
        barmap = pair.integrate
        elements = [sample_polynomial(pair.fine, s, COCHAIN) for s in samples]
    elif side == "chain":
        src, tgt = pair.chain_algebras()
        barmap = pair.crumble
        elements = [sample_polynomial(pair.coarse, s, CHAIN) for s in samples]
    else:
        raise ValueError(f"unknown side {side!r}")
    report = []
    for k in range(k_min, k_max + 1):
        sigma = sigma_cumulant(src, tgt, barmap, k)
        best, point_ok, witness = INF, True, None
        for start in range(len(elements)):
            idx = [(start + j) % len(elements) for j in range(k)]
            out = sigma([elements[i] for i in idx])
            v = out.valuation()
            if v < best:
                best, witness = v, idx
            if out.component(0):
                point_ok = False
        entry = {"side": side, "k": k, "min_valuation": _fmt(best), "bound": k - 1, "witness": witness}
        if side == "cochain":
            entry["point_components_vanish"] = point_ok
            entry["pass"] = best >= k - 1 and point_ok
        else:
            entry["asserted"] = False
            entry["meets_bound"] = best >= k - 1
        report.append(entry)
    return report


# intertwining relations


def _homogeneous_inputs(alg: Algebra, vectors):
    """Expand into (coefficient-free) homogeneous tuples, for sign bookkeeping."""
    split = [sorted(alg.degree_parts(v).items()) for v in vectors]
    for combo in product(*split):
        yield [e for _, e in combo], [d for d, _ in combo]


def intertwine_residual(pair: ScalePair, elements: Sequence[LatticeElement], k: int, route: str = "direct"):
    """``sum_j sigma_{k-j+1}(delta'^wedge_j v) - sum_pi +- delta-bar'_r(sigma(v_I1), ..)`` at order ``k``.

    This is the order-``k`` Taylor coefficient of ``sigma o D - D-bar o sigma``
    with the plain-difference commutator; it vanishes when the maps intertwine.
    """
    src, tgt = pair.cochain_algebras()
    bar = pair.integrate
    total = tgt.zero()
    for elems, degs in _homogeneous_inputs(src, elements):
        # sigma o D
        for j in range(1, k + 1):
            bracket = taylor_bracket_direct(src, j)
            sig = sigma_cumulant(src, tgt, bar, k - j + 1)
            for I in combinations(range(k), j):
                Ic = [i for i in range(k) if i not in I]
                b = bracket([elems[i] for i in I])
                if not b:
                    continue
                sign = subset_sign(I, degs)
                total = total + sig([b] + [elems[i] for i in Ic]) * sign
        # D-bar o sigma
        for blocks in canonical_set_partitions(k):
            r = len(blocks)
            parts = [sigma_cumulant(src, tgt, bar, len(b))([elems[i] for i in b]) for b in blocks]
            if any(not p for p in parts):
                continue
            sign = reorder_sign(blocks, degs)
            total = total - taylor_bracket_direct(tgt, r)(parts) * sign
    return total


def order_two_longhand(pair: ScalePair, v: LatticeElement, w: LatticeElement):
    """``bar[v,w] - [bar v, bar w] - (delta-bar' sigma_2(v^w) - sigma_2(delta'v ^ w + (-1)^|v| v ^ delta'w))``."""
    src, tgt = pair.cochain_algebras()
    bar = pair.integrate
    b_src = taylor_bracket_direct(src, 2)
    b_tgt = taylor_bracket_direct(tgt, 2)
    s2 = sigma_cumulant(src, tgt, bar, 2)
    total = tgt.zero()
    for (vv, ww), (dv, _) in _homogeneous_inputs(src, [v, w]):
        lhs = bar(b_src([vv, ww])) - b_tgt([bar(vv), bar(ww)])
        sign = -1 if dv & 1 else 1
        rhs = tgt.d(s2([vv, ww])) - s2([src.d(vv), ww]) - s2([vv, src.d(ww)]) * sign
        total = total + lhs - rhs
    return total


def intertwine_check(pair: ScalePair, order_max: int, rng: random.Random, trials: int = 3, cells: int = 3) -> list[dict]:
    """Residuals of the intertwining relations on random cochains, orders ``1..order_max``."""
    report = []
    for k in range(1, order_max + 1):
        worst = 0
        for _ in range(trials):
            els = [random_element(rng, pair.fine, COCHAIN, cells) for _ in range(k)]
            res = intertwine_residual(pair, els, k)
            worst = max(worst, len(res))
        report.append({"order": k, "form": "taylor", "nonzero_cells": worst, "pass": worst == 0})
    worst = 0
    for _ in range(trials):
        v, w = (random_element(rng, pair.fine, COCHAIN, cells) for _ in range(2))
        worst = max(worst, len(order_two_longhand(pair, v, w)))
    report.append({"order": 2, "form": "longhand", "nonzero_cells": worst, "pass": worst == 0})
    return report


# towers of scales


def scale_tower(
    levels: Sequence[int],
    role: str = COCHAIN,
    n: int = 1,
    k_max: int = 3,
    samples: Sequence[PolynomialField] = (),
    rng: random.Random | None = None,
    order_max: int = 2,
) -> dict:
    """Pairwise and composed checks across consecutive dyadic scales.

    ``levels`` are scale indices ``m`` with ``h = h_0 2^-m``; they must be
    consecutive.  The finest lattice is periodic with ``N = 2^(L-1)`` so every
    coarsening stays periodic.
    """
    levels = sorted(levels, reverse=True)
    if len(levels) < 2:
        raise ValueError("a tower needs at least two levels")
    if any(a - b != 1 for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be consecutive")
    rng = rng or random.Random(0)
    L = len(levels)
    periodic = [LatticeSpec(n, 2 ** (L - 1))]
    for _ in range(L - 1):
        periodic.append(periodic[-1].coarse())
    radius = 4 * 2 ** (L - 1) + 4
    windows = [LatticeSpec.window(n, radius)]
    for _ in range(L - 1):
        windows.append(windows[-1].coarse())
    pairs = []
    for i in range(L - 1):
        pp = ScalePair(periodic[i])
        wp = ScalePair(windows[i])
        entry = {"fine_level": levels[i], "coarse_level": levels[i + 1]}
        if role == CHAIN:
            entry["chain_map"] = not pp.chain_map_failures()
        else:
            entry["cochain_map"] = not pp.cochain_scaling_failures()
        entry["duality"] = not pp.duality_failures()
        if samples:
            entry["sigma_valuations"] = sigma_divisibility_check(wp, k_max, samples, "cochain" if role == COCHAIN else "chain")
        if role == COCHAIN and pp.fine.N >= 2:
            entry["intertwine_orders"] = intertwine_check(pp, order_max, rng, trials=1)
        pairs.append(entry)
    composed = _composed_check(periodic, role, rng)
    ok = composed
    for e in pairs:
        for key in ("chain_map", "cochain_map", "duality"):
            ok = ok and e.get(key, True)
        for sub in e.get("sigma_valuations", []):
            ok = ok and sub.get("pass", True)
        for sub in e.get("intertwine_orders", []):
            ok = ok and sub["pass"]
    return {"role": role, "levels": list(levels), "pairs": pairs, "composed": composed, "pass": ok}


def _composed_check(specs: Sequence[LatticeSpec], role: str, rng: random.Random, trials: int = 5) -> bool:
    """Composite of all steps: ``iota`` stays a chain map; ``bar`` scales ``delta`` by ``2^-(L-1)``."""
    pairs = [ScalePair(s) for s in specs[:-1]]
    L = len(specs)
    for _ in range(trials):
        if role == CHAIN:
            x = random_element(rng, specs[-1], CHAIN, 4)
            up = x
            for p in reversed(pairs):
                up = p.crumble(up)
            lhs = up
            dx = boundary(x)
            for p in reversed(pairs):
                dx = p.crumble(dx)
            if boundary(lhs) != dx:
                return False
        else:
            f = random_element(rng, specs[0], COCHAIN, 4)
            down = f
            for p in pairs:
                down = p.integrate(down)
            df = coboundary(f)
            for p in pairs:
                df = p.integrate(df)
            if coboundary(down) * HALF ** (L - 1) != df:
                return False
    return True
