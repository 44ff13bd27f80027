"""The graded-symmetric coalgebra on a finite-basis algebra.

Words are ascending tuples of basis indices.  Reordering signs are pushed into
the coefficient, so two elements are equal exactly when their maps agree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from ..scalars import ONE, ZERO, LaurentH, as_laurent
from .algebra import GradedBasisAlgebra, Vector
from .combinatorics import cumulant_weight, ordered_set_partitions, proper_subsets, reorder_sign, subset_sign

Word = tuple


def canonical_word(indices: Sequence[int], degrees: Sequence[int]) -> tuple[int, Word]:
    """Sort ``indices`` into a canonical word, returning ``(sign, word)``.

    ``sign`` is 0 when an odd-degree index repeats.
    """
    idx = list(indices)
    parity = 0
    # insertion sort, tracking the Koszul sign of each adjacent swap
    for p in range(1, len(idx)):
        q = p
        while q > 0 and idx[q - 1] > idx[q]:
            if degrees[idx[q - 1]] & 1 and degrees[idx[q]] & 1:
                parity ^= 1
            idx[q - 1], idx[q] = idx[q], idx[q - 1]
            q -= 1
    for p in range(1, len(idx)):
        if idx[p] == idx[p - 1] and degrees[idx[p]] & 1:
            return 0, ()
    return (-1 if parity else 1), tuple(idx)


class SymElement:
    """Sparse element of S*V: canonical word -> nonzero LaurentH."""

    __slots__ = ("_d",)

    def __init__(self, data: Mapping[Word, LaurentH] | Iterable[tuple[Word, LaurentH]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        d: dict = {}
        for w, c in items:
            c = d.get(w, ZERO) + as_laurent(c)
            if c:
                d[w] = c
            else:
                d.pop(w, None)
        self._d = d

    @classmethod
    def _wrap(cls, d: dict) -> SymElement:
        obj = cls.__new__(cls)
        obj._d = d
        return obj

    @classmethod
    def word(cls, alg: GradedBasisAlgebra, indices: Sequence[int], coeff=ONE) -> SymElement:
        sign, w = canonical_word(indices, alg.degrees)
        if not sign:
            return cls()
        return cls._wrap({w: as_laurent(coeff) * sign}) if coeff else cls()

    def items(self):
        return self._d.items()

    def words(self):
        return self._d.keys()

    def __getitem__(self, w: Word) -> LaurentH:
        return self._d.get(w, ZERO)

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def __add__(self, other: SymElement) -> SymElement:
        if not isinstance(other, SymElement):
            return NotImplemented
        if not other._d:
            return self
        d = dict(self._d)
        _accumulate(d, other._d.items())
        return SymElement._wrap(d)

    def __neg__(self):
        return SymElement._wrap({w: -c for w, c in self._d.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = as_laurent(c)
        if not c:
            return SymElement()
        return SymElement._wrap({w: v * c for w, v in self._d.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymElement):
            return NotImplemented
        return self._d == other._d

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def component(self, k: int) -> SymElement:
        """Part of word length ``k`` (the S^k V summand)."""
        return SymElement._wrap({w: c for w, c in self._d.items() if len(w) == k})

    def max_length(self) -> int:
        return max((len(w) for w in self._d), default=0)

    def p1(self) -> Vector:
        """Projection onto V (length-one words)."""
        return Vector._wrap({w[0]: c for w, c in self._d.items() if len(w) == 1})

    def to_json(self) -> list:
        return [[list(w), c.to_json()] for w, c in sorted(self._d.items())]

    @classmethod
    def from_json(cls, alg: GradedBasisAlgebra, data) -> SymElement:
        out = SymElement()
        for w, c in data:
            out = out + SymElement.word(alg, w, LaurentH.from_json(c))
        return out

    def __repr__(self):
        parts = [f"({c})*{'^'.join(map(str, w))}" for w, c in sorted(self._d.items())]
        return "SymElement(" + (" + ".join(parts) or "0") + ")"


def _accumulate(d: dict, items) -> None:
    for k, c in items:
        s = d.get(k)
        if s is None:
            if c:
                d[k] = c
        else:
            s = s + c
            if s:
                d[k] = s
            else:
                del d[k]


def word_degree(alg: GradedBasisAlgebra, w: Word) -> int:
    return sum(alg.degrees[i] for i in w)


def from_vector(v: Vector) -> SymElement:
    """Embed V as the length-one words."""
    return SymElement._wrap({(i,): c for i, c in v.items()})


def wedge(alg: GradedBasisAlgebra, *elements: SymElement) -> SymElement:
    """Product in S*V (concatenate words, then canonicalize)."""
    acc: dict = {}
    degs = alg.degrees
    for combo in cartesian(*(e.items() for e in elements)):
        coeff = ONE
        letters: list[int] = []
        for w, c in combo:
            coeff = coeff * c
            letters.extend(w)
        sign, cw = canonical_word(letters, degs)
        if sign:
            _accumulate(acc, [(cw, coeff * sign)])
    return SymElement._wrap(acc)


def wedge_vectors(alg: GradedBasisAlgebra, vectors: Sequence[Vector]) -> SymElement:
    """``x_1 ^ ... ^ x_r`` for algebra vectors, expanded over the basis."""
    return wedge(alg, *(from_vector(v) for v in vectors))


# coproducts


class SymTensor:
    """Sparse element of (S*V)^{(x) r}: tuple of words -> coefficient."""

    __slots__ = ("_d",)

    def __init__(self, data: Mapping[tuple, LaurentH] | None = None):
        self._d = {k: v for k, v in (data or {}).items() if v}

    @classmethod
    def _wrap(cls, d):
        obj = cls.__new__(cls)
        obj._d = d
        return obj

    def items(self):
        return self._d.items()

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def __add__(self, other):
        d = dict(self._d)
        _accumulate(d, other._d.items())
        return SymTensor._wrap(d)

    def __neg__(self):
        return SymTensor._wrap({k: -v for k, v in self._d.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return self._d == other._d

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __repr__(self):
        return f"SymTensor({self._d!r})"


def _word_coproduct(alg: GradedBasisAlgebra, w: Word):
    degs = [alg.degrees[i] for i in w]
    for I, Ic in proper_subsets(len(w)):
        yield tuple(w[i] for i in I), tuple(w[i] for i in Ic), subset_sign(I, degs)


def reduced_coproduct(alg: GradedBasisAlgebra, x: SymElement) -> SymTensor:
    """Sum over proper non-empty subsets ``I`` of ``+-^I v_I (x) v_{I^c}``."""
    acc: dict = {}
    for w, c in x.items():
        for left, right, sign in _word_coproduct(alg, w):
            _accumulate(acc, [((left, right), c * sign)])
    return SymTensor._wrap(acc)


def iterated_coproduct(alg: GradedBasisAlgebra, x: SymElement, r: int) -> SymTensor:
    """``Delta^{r-1}`` built as ``(Delta (x) id^{(x) n}) o Delta^n``; ``r = 1`` is the identity."""
    if r < 1:
        raise ValueError("r must be at least 1")
    current = SymTensor._wrap({(w,): c for w, c in x.items()})
    for _ in range(r - 1):
        acc: dict = {}
        for words, c in current.items():
            for left, right, sign in _word_coproduct(alg, words[0]):
                _accumulate(acc, [((left, right) + words[1:], c * sign)])
        current = SymTensor._wrap(acc)
    return current


def iterated_coproduct_right(alg: GradedBasisAlgebra, x: SymElement, r: int) -> SymTensor:
    """The other bracketing, expanding the last factor each time."""
    if r < 1:
        raise ValueError("r must be at least 1")
    current = SymTensor._wrap({(w,): c for w, c in x.items()})
    for _ in range(r - 1):
        acc: dict = {}
        for words, c in current.items():
            for left, right, sign in _word_coproduct(alg, words[-1]):
                _accumulate(acc, [(words[:-1] + (left, right), c * sign)])
        current = SymTensor._wrap(acc)
    return current


def twist(alg: GradedBasisAlgebra, t: SymTensor) -> SymTensor:
    """``P(v (x) w) = (-1)^{|v||w|} w (x) v`` on two-fold tensors."""
    acc: dict = {}
    for (a, b), c in t.items():
        sign = -1 if (word_degree(alg, a) * word_degree(alg, b)) & 1 else 1
        _accumulate(acc, [((b, a), c * sign)])
    return SymTensor._wrap(acc)


def tensor_apply(alg: GradedBasisAlgebra, maps: Sequence[Callable[[SymElement], SymElement]], t: SymTensor, signs: Sequence[bool] | None = None) -> SymTensor:
    """Apply ``f_1 (x) ... (x) f_r`` factorwise (plain composition, no Koszul sign).

    ``signs[i]`` multiplies factor ``i`` by ``(-1)^{|factor|}`` first (the
    ``id-bar`` map).
    """
    acc: dict = {}
    for words, c in t.items():
        images = []
        coeff = c
        for i, (f, w) in enumerate(zip(maps, words)):
            if signs and signs[i] and word_degree(alg, w) & 1:
                coeff = -coeff
            images.append(f(SymElement._wrap({w: ONE})))
        for combo in cartesian(*(im.items() for im in images)):
            cc = coeff
            key = []
            for w, v in combo:
                cc = cc * v
                key.append(w)
            _accumulate(acc, [(tuple(key), cc)])
    return SymTensor._wrap(acc)


# the cumulant bijection


def tau1_word(alg: GradedBasisAlgebra, w: Sequence[int]) -> Vector:
    """Ordered product ``v_1 ... v_k`` of basis letters."""
    if not w:
        raise ValueError("empty word has no product")
    acc = alg.basis(w[0])
    for i in w[1:]:
        acc = alg.mul(acc, alg.basis(i))
        if not acc:
            break
    return acc


def tau1(alg: GradedBasisAlgebra, x: SymElement) -> Vector:
    acc = Vector()
    for w, c in x.items():
        acc = acc + tau1_word(alg, w) * c
    return acc


def _partition_sum(alg: GradedBasisAlgebra, w: Word, weight: Callable[[list], Fraction | int]) -> SymElement:
    """Sum over ordered partitions of positions, divided by ``r!``."""
    degs = [alg.degrees[i] for i in w]
    k = len(w)
    products: dict = {}

    def block_product(block):
        v = products.get(block)
        if v is None:
            v = tau1_word(alg, [w[i] for i in block])
            products[block] = v
        return v

    acc = SymElement()
    for r in range(1, k + 1):
        scale = Fraction(1, factorial(r))
        part_acc = SymElement()
        for blocks in ordered_set_partitions(k, r):
            coeff = weight(blocks)
            if not coeff:
                continue
            vecs = [block_product(b) for b in blocks]
            if any(not v for v in vecs):
                continue
            sign = reorder_sign(blocks, degs)
            part_acc = part_acc + wedge_vectors(alg, vecs) * (coeff * sign)
        acc = acc + part_acc * scale
    return acc


@lru_cache(maxsize=None)
def _unit_weight(_blocks) -> int:
    return 1


def tau(alg: GradedBasisAlgebra, x: SymElement) -> SymElement:
    """Cumulant bijection: sum over partitions of wedges of block products."""
    acc = SymElement()
    for w, c in x.items():
        acc = acc + _partition_sum(alg, w, lambda blocks: 1) * c
    return acc


def tau_inv(alg: GradedBasisAlgebra, x: SymElement) -> SymElement:
    """Inverse cumulant bijection with block weights ``(-1)^{k-1} (k-1)!``."""
    def weight(blocks):
        out = 1
        for b in blocks:
            out *= cumulant_weight(len(b))
        return out

    acc = SymElement()
    for w, c in x.items():
        acc = acc + _partition_sum(alg, w, weight) * c
    return acc


def tau_via_coproduct(alg: GradedBasisAlgebra, x: SymElement) -> SymElement:
    """``sum_r (tau_1)^{(x) r} o Delta^{r-1}``, symmetrized back into S^r V."""
    acc = SymElement()
    for r in range(1, x.max_length() + 1):
        t = iterated_coproduct(alg, x, r)
        part = SymElement()
        for words, c in t.items():
            vecs = [tau1_word(alg, w) for w in words]
            if all(vecs):
                part = part + wedge_vectors(alg, vecs) * c
        acc = acc + part * Fraction(1, factorial(r))
    return acc


def tau_inv_neumann(alg: GradedBasisAlgebra, x: SymElement) -> SymElement:
    """Inverse of ``tau`` as ``sum_j (id - tau)^j``; terminates since ``tau - id`` shortens words."""
    acc = SymElement()
    term = x
    while term:
        acc = acc + term
        term = term - tau(alg, term)
    return acc


# coderivations


def d_wedge(alg: GradedBasisAlgebra, x: SymElement) -> SymElement:
    """Extend the differential as a coderivation (Koszul sign on each slot)."""
    acc = SymElement()
    degs = alg.degrees
    for w, c in x.items():
        passed = 0
        for i, letter in enumerate(w):
            dv = alg.d(alg.basis(letter))
            if dv:
                sign = -1 if passed & 1 else 1
                pieces = [alg.basis(j) for j in w[:i]] + [dv] + [alg.basis(j) for j in w[i + 1:]]
                acc = acc + wedge_vectors(alg, pieces) * (c * sign)
            passed += degs[letter]
    return acc


def coderivation_extend(
    alg: GradedBasisAlgebra, bracket: Callable[[Word], Vector], k: int, x: SymElement
) -> SymElement:
    """``sum_{|I|=k} +-^I bracket(v_I) ^ v_{I^c}`` on every word of ``x``.

    ``bracket`` receives a canonical word of length ``k`` and returns a vector.
    """
    from itertools import combinations

    acc = SymElement()
    for w, c in x.items():
        n = len(w)
        if n < k:
            continue
        degs = [alg.degrees[i] for i in w]
        for I in combinations(range(n), k):
            img = bracket(tuple(w[i] for i in I))
            if not img:
                continue
            rest = [alg.basis(w[i]) for i in range(n) if i not in I]
            acc = acc + wedge_vectors(alg, [img] + rest) * (c * subset_sign(I, degs))
    return acc


def conjugated_coderivation(alg: GradedBasisAlgebra, x: SymElement) -> SymElement:
    """``D = tau^{-1} o d^wedge o tau``."""
    return tau_inv(alg, d_wedge(alg, tau(alg, x)))


def idbar(alg: GradedBasisAlgebra, x: SymElement) -> SymElement:
    return SymElement._wrap({w: (-c if word_degree(alg, w) & 1 else c) for w, c in x.items()})
