"""Finite-basis graded commutative algebras with a square-zero differential."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Any, Callable, Hashable, Iterable, Mapping, Protocol, Sequence

from ..scalars import ONE, ZERO, LaurentH, as_laurent


class Vector:
    """Immutable sparse vector: basis key -> nonzero LaurentH."""

    __slots__ = ("_d",)

    def __init__(self, data: Mapping[Hashable, Any] | Iterable[tuple[Hashable, Any]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        d: dict = {}
        for k, v in items:
            v = d.get(k, ZERO) + as_laurent(v)
            if v:
                d[k] = v
            else:
                d.pop(k, None)
        self._d = d

    @classmethod
    def _wrap(cls, d: dict) -> Vector:
        obj = cls.__new__(cls)
        obj._d = d
        return obj

    @classmethod
    def basis(cls, key: Hashable, coeff=ONE) -> Vector:
        c = as_laurent(coeff)
        return cls._wrap({key: c} if c else {})

    def items(self):
        return self._d.items()

    def keys(self):
        return self._d.keys()

    def get(self, key, default=ZERO) -> LaurentH:
        return self._d.get(key, default)

    def __getitem__(self, key) -> LaurentH:
        return self._d.get(key, ZERO)

    def __len__(self):
        return len(self._d)

    def __iter__(self):
        return iter(self._d)

    def __bool__(self):
        return bool(self._d)

    def __add__(self, other: Vector) -> Vector:
        if not isinstance(other, Vector):
            return NotImplemented
        if not other._d:
            return self
        if not self._d:
            return other
        d = dict(self._d)
        for k, v in other._d.items():
            s = d.get(k)
            if s is None:
                d[k] = v
            else:
                s = s + v
                if s:
                    d[k] = s
                else:
                    del d[k]
        return Vector._wrap(d)

    def __neg__(self) -> Vector:
        return Vector._wrap({k: -v for k, v in self._d.items()})

    def __sub__(self, other: Vector) -> Vector:
        if not isinstance(other, Vector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> Vector:
        c = as_laurent(c)
        if not c:
            return Vector._wrap({})
        if c == ONE:
            return self
        return Vector._wrap({k: v * c for k, v in self._d.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self._d == other._d

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {v}" for k, v in sorted(self._d.items(), key=lambda kv: repr(kv[0])))
        return f"Vector({{{inner}}})"


class Algebra(Protocol):
    """What the element-level bracket and cumulant routes need."""

    differential_degree: int

    def zero(self) -> Any: ...

    def mul(self, x, y) -> Any: ...

    def d(self, x) -> Any: ...

    def degree_parts(self, x) -> dict[int, Any]: ...


def multilinear(
    degree_parts: Callable[[Any], Mapping[int, Any]],
    fn: Callable[[list, list[int]], Any],
    vectors: Sequence,
    zero,
):
    """Extend ``fn`` (defined on homogeneous tuples) multilinearly."""
    split = [sorted(degree_parts(v).items()) for v in vectors]
    total = zero
    for combo in cartesian(*split):
        degrees = [deg for deg, _ in combo]
        elems = [e for _, e in combo]
        total = total + fn(elems, degrees)
    return total


class GradedBasisAlgebra:
    """Graded commutative associative algebra given by structure constants.

    ``products[(i, j)]`` is ``e_i * e_j`` and ``differential[i]`` is ``d e_i``;
    missing keys mean zero.  The differential degree is declared, never inferred.
    """

    def __init__(
        self,
        degrees: Sequence[int],
        products: Mapping[tuple[int, int], Vector],
        differential: Mapping[int, Vector] | None = None,
        differential_degree: int = 1,
        names: Sequence[str] | None = None,
    ):
        if differential_degree not in (1, -1):
            raise ValueError("differential degree must be +1 or -1")
        self.degrees = tuple(int(d) for d in degrees)
        self.products = {k: v for k, v in products.items() if v}
        self.differential = {k: v for k, v in (differential or {}).items() if v}
        self.differential_degree = differential_degree
        self.names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(len(self.degrees)))
        self._left: dict[int, list[tuple[int, Vector]]] = {}
        for (i, j), v in self.products.items():
            self._left.setdefault(i, []).append((j, v))

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def zero(self) -> Vector:
        return Vector()

    def basis(self, i: int, coeff=ONE) -> Vector:
        return Vector.basis(i, coeff)

    def product_of_basis(self, i: int, j: int) -> Vector:
        return self.products.get((i, j), Vector())

    def mul(self, x: Vector, y: Vector) -> Vector:
        if not x or not y:
            return Vector()
        acc: dict = {}
        for i, a in x.items():
            row = self._left.get(i)
            if not row:
                continue
            for j, prod in row:
                b = y.get(j)
                if not b:
                    continue
                c = a * b
                for k, s in prod.items():
                    t = acc.get(k, ZERO) + c * s
                    if t:
                        acc[k] = t
                    else:
                        acc.pop(k, None)
        return Vector._wrap(acc)

    def d(self, x: Vector) -> Vector:
        acc: dict = {}
        for i, a in x.items():
            img = self.differential.get(i)
            if img is None:
                continue
            for k, s in img.items():
                t = acc.get(k, ZERO) + a * s
                if t:
                    acc[k] = t
                else:
                    acc.pop(k, None)
        return Vector._wrap(acc)

    def degree_parts(self, x: Vector) -> dict[int, Vector]:
        parts: dict[int, dict] = {}
        for i, a in x.items():
            parts.setdefault(self.degrees[i], {})[i] = a
        return {deg: Vector._wrap(d) for deg, d in parts.items()}

    def is_homogeneous(self, x: Vector) -> bool:
        return len({self.degrees[i] for i in x.keys()}) <= 1

    def with_products(self, products: Mapping[tuple[int, int], Vector]) -> GradedBasisAlgebra:
        return GradedBasisAlgebra(self.degrees, products, self.differential, self.differential_degree, self.names)

    def with_differential(self, differential: Mapping[int, Vector], degree: int | None = None) -> GradedBasisAlgebra:
        return GradedBasisAlgebra(
            self.degrees, self.products, differential,
            self.differential_degree if degree is None else degree, self.names,
        )

    # serialization

    def to_json(self) -> dict:
        def vec(v: Vector):
            return [[k, c.to_json()] for k, c in sorted(v.items())]

        return {
            "basis_degrees": list(self.degrees),
            "names": list(self.names),
            "differential_degree": self.differential_degree,
            "products": [[i, j, vec(v)] for (i, j), v in sorted(self.products.items())],
            "differential": [[i, vec(v)] for i, v in sorted(self.differential.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> GradedBasisAlgebra:
        def vec(entries):
            return Vector((int(k), LaurentH.from_json(c)) for k, c in entries)

        degrees = data["basis_degrees"]
        products = {(int(i), int(j)): vec(v) for i, j, v in data.get("products", [])}
        differential = {int(i): vec(v) for i, v in data.get("differential", [])}
        dim = len(degrees)
        for (i, j), v in products.items():
            if not (0 <= i < dim and 0 <= j < dim) or any(not 0 <= k < dim for k in v.keys()):
                raise ValueError(f"product constant ({i}, {j}) refers to a missing basis element")
        return cls(degrees, products, differential, int(data.get("differential_degree", 1)), data.get("names"))

    @classmethod
    def load(cls, path) -> GradedBasisAlgebra:
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}


def check_algebra_axioms(alg: GradedBasisAlgebra, limit: int = 20) -> list[Violation]:
    """Violated axioms with basis-index witnesses; empty when all hold."""
    out: list[Violation] = []
    deg = alg.degrees
    dim = alg.dim

    def full():
        return len(out) >= limit

    for (i, j), v in alg.products.items():
        if any(deg[k] != deg[i] + deg[j] for k in v.keys()):
            out.append(Violation("product-degree", (i, j), f"e{i}*e{j} is not of degree {deg[i] + deg[j]}"))
            if full():
                return out
    for i in range(dim):
        for j in range(i, dim):
            sign = -1 if (deg[i] * deg[j]) & 1 else 1
            if alg.product_of_basis(j, i) != alg.product_of_basis(i, j) * sign:
                out.append(Violation("graded-commutativity", (i, j)))
                if full():
                    return out
    for i in range(dim):
        for j in range(dim):
            ij = alg.product_of_basis(i, j)
            for k in range(dim):
                jk = alg.product_of_basis(j, k)
                if not ij and not jk:
                    continue
                if alg.mul(ij, alg.basis(k)) != alg.mul(alg.basis(i), jk):
                    out.append(Violation("associativity", (i, j, k)))
                    if full():
                        return out
    for i, v in alg.differential.items():
        if any(deg[k] != deg[i] + alg.differential_degree for k in v.keys()):
            out.append(Violation("differential-degree", (i,), f"d e{i} not of degree {deg[i] + alg.differential_degree}"))
            if full():
                return out
    for i in range(dim):
        if alg.d(alg.d(alg.basis(i))):
            out.append(Violation("differential-square", (i,), f"d(d e{i}) != 0"))
            if full():
                return out
    return out


# constructions


def _merge_sign(a: int, b: int, gen_degrees: Sequence[int]) -> int:
    """Sign of e_A * e_B -> e_{A|B} for disjoint generator bitmasks."""
    parity = 0
    for i in range(len(gen_degrees)):
        if (a >> i) & 1 and gen_degrees[i] & 1:
            for j in range(i):
                if (b >> j) & 1 and gen_degrees[j] & 1:
                    parity ^= 1
    return -1 if parity else 1


def exterior_algebra(
    generator_degrees: Sequence[int],
    differential: Mapping[int, Vector] | None = None,
    differential_degree: int = 1,
) -> GradedBasisAlgebra:
    """Graded algebra on generators with all squares zero.

    Basis element ``m`` (a bitmask of generators) is the ordered product of its
    generators; index 0 is the unit.  For odd generators this is the usual
    exterior algebra, for even ones the truncation ``x**2 = 0``.
    """
    g = len(generator_degrees)
    size = 1 << g
    degrees = [sum(generator_degrees[i] for i in range(g) if (m >> i) & 1) for m in range(size)]
    products = {}
    for a in range(size):
        for b in range(size):
            if a & b:
                continue
            products[(a, b)] = Vector.basis(a | b, _merge_sign(a, b, generator_degrees))
    names = []
    for m in range(size):
        letters = [f"x{i + 1}" for i in range(g) if (m >> i) & 1]
        names.append("*".join(letters) if letters else "1")
    return GradedBasisAlgebra(degrees, products, differential, differential_degree, names)


def random_coefficient(rng: random.Random, allow_h: bool = True) -> LaurentH:
    c = rng.choice([-3, -2, -1, 1, 2, 3])
    e = rng.choice([-1, 0, 0, 1]) if allow_h else 0
    return LaurentH.monomial(c, e)


def random_square_zero_differential(
    rng: random.Random, degrees: Sequence[int], differential_degree: int, density: float = 0.6
) -> dict[int, Vector]:
    """A strictly triangular degree-shift map: sources map into targets, targets to zero."""
    role = [rng.choice(("source", "target", "target", "idle")) for _ in degrees]
    targets_by_degree: dict[int, list[int]] = {}
    for i, r in enumerate(role):
        if r == "target":
            targets_by_degree.setdefault(degrees[i], []).append(i)
    out = {}
    for i, r in enumerate(role):
        if r != "source":
            continue
        pool = targets_by_degree.get(degrees[i] + differential_degree, [])
        img = {t: random_coefficient(rng) for t in pool if rng.random() < density}
        if img:
            out[i] = Vector(img)
    return out


def random_dg_algebra(
    rng: random.Random,
    max_generators: int = 4,
    degree_choices: Sequence[int] = (0, 1, 1, 2, 3),
    differential_degree: int | None = None,
) -> GradedBasisAlgebra:
    """Random truncated graded algebra with a random square-zero, non-derivation differential."""
    g = rng.randint(1, max_generators)
    gen_degrees = [rng.choice(degree_choices) for _ in range(g)]
    if differential_degree is None:
        differential_degree = rng.choice((1, -1))
    base = exterior_algebra(gen_degrees, differential_degree=differential_degree)
    diff = random_square_zero_differential(rng, base.degrees, differential_degree)
    return base.with_differential(diff)


def random_vector(rng: random.Random, alg: GradedBasisAlgebra, terms: int = 2, homogeneous: bool = False) -> Vector:
    keys = list(range(alg.dim))
    if homogeneous:
        deg = alg.degrees[rng.choice(keys)]
        keys = [i for i in keys if alg.degrees[i] == deg]
    chosen = rng.sample(keys, min(terms, len(keys)))
    return Vector((i, random_coefficient(rng)) for i in chosen)


class LinearMap:
    """Linear map between finite-basis algebras given on basis elements."""

    def __init__(self, source: GradedBasisAlgebra, target: GradedBasisAlgebra, images: Mapping[int, Vector]):
        self.source = source
        self.target = target
        self.images = {i: v for i, v in images.items() if v}

    def __call__(self, x: Vector) -> Vector:
        acc = Vector()
        for i, a in x.items():
            img = self.images.get(i)
            if img:
                acc = acc + img * a
        return acc

    def grading_violations(self) -> list[int]:
        return [
            i for i, v in self.images.items()
            if any(self.target.degrees[k] != self.source.degrees[i] for k in v.keys())
        ]


def random_grade_preserving_map(rng: random.Random, source: GradedBasisAlgebra, target: GradedBasisAlgebra, density: float = 0.5) -> LinearMap:
    images = {}
    for i in range(source.dim):
        pool = [k for k in range(target.dim) if target.degrees[k] == source.degrees[i]]
        img = {k: random_coefficient(rng) for k in pool if rng.random() < density}
        if img:
            images[i] = Vector(img)
    return LinearMap(source, target, images)


def tensor_algebra(a: GradedBasisAlgebra, b: GradedBasisAlgebra) -> GradedBasisAlgebra:
    """Graded tensor product; basis ``(i, j)`` is flattened to ``i * b.dim + j``."""
    if a.differential_degree != b.differential_degree:
        raise ValueError("tensor factors must have differentials of the same degree")
    nb = b.dim
    degrees = [a.degrees[i] + b.degrees[j] for i in range(a.dim) for j in range(nb)]
    products = {}
    for (i1, i2), va in a.products.items():
        for (j1, j2), vb in b.products.items():
            sign = -1 if (b.degrees[j1] * a.degrees[i2]) & 1 else 1
            img = {}
            for k, ca in va.items():
                for l, cb in vb.items():
                    img[k * nb + l] = ca * cb * sign
            products[(i1 * nb + j1, i2 * nb + j2)] = Vector(img)
    differential = {}
    for i in range(a.dim):
        for j in range(nb):
            img: dict = {}
            for k, c in a.differential.get(i, Vector()).items():
                img[k * nb + j] = img.get(k * nb + j, ZERO) + c
            sign = -1 if a.degrees[i] & 1 else 1
            for l, c in b.differential.get(j, Vector()).items():
                img[i * nb + l] = img.get(i * nb + l, ZERO) + c * sign
            v = Vector(img)
            if v:
                differential[i * nb + j] = v
    names = [f"{a.names[i]}(x){b.names[j]}" for i in range(a.dim) for j in range(nb)]
    return GradedBasisAlgebra(degrees, products, differential, a.differential_degree, names)


def tensor_vector(x: Vector, y: Vector, b_dim: int) -> Vector:
    return Vector((i * b_dim + j, ci * cj) for i, ci in x.items() for j, cj in y.items())


def tensor_map(f: LinearMap, g: LinearMap) -> LinearMap:
    src = tensor_algebra(f.source, g.source)
    tgt = tensor_algebra(f.target, g.target)
    nb_src, nb_tgt = g.source.dim, g.target.dim
    images = {}
    for i in range(f.source.dim):
        for j in range(nb_src):
            fi, gj = f.images.get(i), g.images.get(j)
            if fi and gj:
                images[i * nb_src + j] = tensor_vector(fi, gj, nb_tgt)
    return LinearMap(src, tgt, images)
