"""Taylor brackets of ``D = tau^{-1} d^wedge tau`` by three independent routes.

Element-level routes work on any object satisfying :class:`Algebra`, so the
lattice algebras reuse them unchanged.
"""

from __future__ import annotations

from typing import Callable, Sequence

from ..scalars import ONE
from .algebra import Algebra, GradedBasisAlgebra, Vector, multilinear
from .combinatorics import subset_sign
from .symmetric import SymElement, Word, coderivation_extend, conjugated_coderivation, wedge_vectors


def _sign(parity: int) -> int:
    return -1 if parity & 1 else 1


class ConjugationBrackets:
    """``d_k = p_1 o tau^{-1} o d^wedge o tau`` on ``S^k V``, cached per basis word."""

    def __init__(self, alg: GradedBasisAlgebra):
        self.alg = alg
        self._cache: dict[Word, Vector] = {}

    def on_word(self, w: Word) -> Vector:
        out = self._cache.get(w)
        if out is None:
            image = conjugated_coderivation(self.alg, SymElement._wrap({w: ONE}))
            out = image.p1()
            self._cache[w] = out
        return out

    def on_element(self, x: SymElement) -> Vector:
        acc = Vector()
        for w, c in x.items():
            acc = acc + self.on_word(w) * c
        return acc

    def __call__(self, vectors: Sequence[Vector]) -> Vector:
        return self.on_element(wedge_vectors(self.alg, vectors))


def taylor_bracket_conjugation(alg: GradedBasisAlgebra, k: int) -> Callable[[Sequence[Vector]], Vector]:
    if k < 1:
        raise ValueError("k must be at least 1")
    route = ConjugationBrackets(alg)

    def bracket(vectors: Sequence[Vector]) -> Vector:
        if len(vectors) != k:
            raise ValueError(f"expected {k} arguments, got {len(vectors)}")
        return route(vectors)

    return bracket


def _direct_homogeneous(alg: Algebra, elems: list, degrees: list[int]):
    k = len(elems)
    full = (1 << k) - 1
    products: dict[int, object] = {}

    def prod(mask: int):
        # ordered product of the selected arguments
        out = products.get(mask)
        if out is None:
            idx = [i for i in range(k) if (mask >> i) & 1]
            out = elems[idx[0]]
            for i in idx[1:]:
                out = alg.mul(out, elems[i])
            products[mask] = out
        return out

    total = alg.zero()
    for mask in range(1, full + 1):
        r = bin(mask).count("1")
        inside = [i for i in range(k) if (mask >> i) & 1]
        dv = alg.d(prod(mask))
        if mask != full:
            dv = alg.mul(dv, prod(full ^ mask))
        if not dv:
            continue
        sign = _sign(k - r) * subset_sign(inside, degrees)
        total = total + (dv if sign > 0 else -dv)
    return total


def taylor_bracket_direct(alg: Algebra, k: int) -> Callable[[Sequence], object]:
    """Closed subset sum ``sum_r (-1)^{k-r} sum_{|I|=r} +-^I d(tau_1 v_I) tau_1 v_{I^c}``."""
    if k < 1:
        raise ValueError("k must be at least 1")

    def bracket(vectors: Sequence):
        if len(vectors) != k:
            raise ValueError(f"expected {k} arguments, got {len(vectors)}")
        return multilinear(alg.degree_parts, lambda e, d: _direct_homogeneous(alg, e, d), vectors, alg.zero())

    return bracket


def _recursive_homogeneous(alg: Algebra, k: int, elems: list, degrees: list[int]):
    if k == 1:
        return alg.d(elems[0])
    v1, v2, rest = elems[0], elems[1], elems[2:]
    d1, d2, drest = degrees[0], degrees[1], degrees[2:]
    first = _recursive_homogeneous(alg, k - 1, [alg.mul(v1, v2)] + rest, [d1 + d2] + drest)
    second = alg.mul(v1, _recursive_homogeneous(alg, k - 1, [v2] + rest, [d2] + drest))
    third = alg.mul(v2, _recursive_homogeneous(alg, k - 1, [v1] + rest, [d1] + drest))
    out = first
    out = out - second if _sign(d1) > 0 else out + second
    out = out - third if _sign(d2 * (1 + d1)) > 0 else out + third
    return out


def taylor_bracket_recursive(alg: Algebra, k: int) -> Callable[[Sequence], object]:
    """``d_k`` from ``d_{k-1}`` via the three-term commutator recursion."""
    if k < 2:
        raise ValueError("the recursion starts at k = 2")

    def bracket(vectors: Sequence):
        if len(vectors) != k:
            raise ValueError(f"expected {k} arguments, got {len(vectors)}")
        return multilinear(
            alg.degree_parts, lambda e, d: _recursive_homogeneous(alg, k, e, d), vectors, alg.zero()
        )

    return bracket


def coderivation_from_brackets(alg: GradedBasisAlgebra, x: SymElement, kmax: int | None = None) -> SymElement:
    """``sum_k d_k^wedge(x)`` with ``d_k`` taken from the conjugation route."""
    route = ConjugationBrackets(alg)
    top = x.max_length() if kmax is None else kmax
    acc = SymElement()
    for k in range(1, top + 1):
        acc = acc + coderivation_extend(alg, route.on_word, k, x)
    return acc


def derivation_extension(
    base: GradedBasisAlgebra, generator_images: dict[int, Vector], generator_masks: Sequence[int]
) -> GradedBasisAlgebra:
    """Extend images of generators to a derivation of a bitmask exterior algebra.

    ``generator_masks[g]`` is the basis index of generator ``g``.  The caller
    is responsible for choosing images compatible with the truncation; the
    result should be checked with :func:`check_algebra_axioms`.
    """
    diff: dict[int, Vector] = {}
    for m in range(base.dim):
        gens = [g for g, gm in enumerate(generator_masks) if m & gm]
        if not gens:
            continue
        # m is the ordered product of its generators; apply Leibniz left to right
        acc = Vector()
        passed = 0
        for pos, g in enumerate(gens):
            img = generator_images.get(g)
            if img:
                left = Vector.basis(0)
                for h in gens[:pos]:
                    left = base.mul(left, base.basis(generator_masks[h]))
                right = Vector.basis(0)
                for h in gens[pos + 1:]:
                    right = base.mul(right, base.basis(generator_masks[h]))
                term = base.mul(base.mul(left, img), right)
                acc = acc + (term if _sign(passed) > 0 else -term)
            passed += base.degrees[generator_masks[g]]
        if acc:
            diff[m] = acc
    return base.with_differential(diff)
