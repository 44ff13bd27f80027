"""Chains and cochains as sparse maps from cells to scalars."""

from __future__ import annotations

import json
from typing import Iterator, Mapping

from ..scalars import INF, ZERO, LaurentH, as_laurent
from .spec import PERIODIC, Cell, LatticeSpec, WindowOverflowError, axes_of, mask_of, popcount

CHAIN = "chain"
COCHAIN = "cochain"


def intersect_domains(a, b):
    if a is None:
        return b
    if b is None:
        return a
    out = tuple((max(l1, l2), min(h1, h2)) for (l1, h1), (l2, h2) in zip(a, b))
    if any(lo > hi for lo, hi in out):
        raise WindowOverflowError("domains do not overlap")
    return out


def _inside(center, domain) -> bool:
    return all(lo <= c <= hi for c, (lo, hi) in zip(center, domain))


class LatticeElement:
    """A chain or cochain: centre -> {type mask -> nonzero LaurentH}.

    In window mode ``domain`` is the box of centres where the values are
    known; entries outside it are never stored.  Periodic elements have
    ``domain = None``.
    """

    __slots__ = ("spec", "role", "_d", "domain")

    def __init__(self, spec: LatticeSpec, role: str = COCHAIN, cells: Mapping | None = None, domain=None):
        if role not in (CHAIN, COCHAIN):
            raise ValueError(f"unknown role {role!r}")
        self.spec = spec
        self.role = role
        if spec.mode == PERIODIC:
            self.domain = None
        else:
            self.domain = intersect_domains(spec.bounds, tuple(domain) if domain is not None else None)
        d: dict = {}
        for key, c in (cells or {}).items():
            mask, center = key
            center = spec.normalize(center)
            if self.domain is not None and not _inside(center, self.domain):
                raise WindowOverflowError(f"cell centre {center} outside the domain")
            c = as_laurent(c)
            if not c:
                continue
            row = d.setdefault(center, {})
            s = row.get(mask, ZERO) + c
            if s:
                row[mask] = s
            else:
                del row[mask]
                if not row:
                    del d[center]
        self._d = d

    @classmethod
    def _wrap(cls, spec, role, d, domain):
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.role = role
        obj._d = d
        obj.domain = domain
        return obj

    @classmethod
    def zero(cls, spec: LatticeSpec, role: str = COCHAIN) -> LatticeElement:
        return cls(spec, role)

    @classmethod
    def constant(cls, spec: LatticeSpec, role: str = COCHAIN, mask: int = 0, coeff=1) -> LatticeElement:
        """``coeff * I`` at every centre (``dI`` for cochains)."""
        c = as_laurent(coeff)
        d = {p: {mask: c} for p in spec.points()} if c else {}
        return cls._wrap(spec, role, d, spec.bounds)

    @classmethod
    def cell(cls, spec: LatticeSpec, role: str, mask: int, center, coeff=1) -> LatticeElement:
        return cls(spec, role, {(mask, tuple(center)): coeff})

    # access

    def items(self) -> Iterator[tuple[Cell, LaurentH]]:
        for p, row in self._d.items():
            for m, c in row.items():
                yield Cell(m, p), c

    def rows(self):
        return self._d.items()

    def get(self, mask: int, center) -> LaurentH:
        row = self._d.get(self.spec.normalize(center))
        return row.get(mask, ZERO) if row else ZERO

    def __len__(self):
        return sum(len(r) for r in self._d.values())

    def __bool__(self):
        return bool(self._d)

    def masks(self) -> set[int]:
        return {m for row in self._d.values() for m in row}

    def degrees(self) -> set[int]:
        return {popcount(m) for m in self.masks()}

    def degree_parts(self) -> dict[int, LatticeElement]:
        parts: dict[int, dict] = {}
        for p, row in self._d.items():
            for m, c in row.items():
                parts.setdefault(popcount(m), {}).setdefault(p, {})[m] = c
        return {k: self._new(d) for k, d in parts.items()}

    def component(self, mask: int) -> LatticeElement:
        d = {p: {mask: row[mask]} for p, row in self._d.items() if mask in row}
        return self._new(d)

    def valuation(self):
        return min((c.valuation() for _, c in self.items()), default=INF)

    def _new(self, d, domain=...) -> LatticeElement:
        return LatticeElement._wrap(self.spec, self.role, d, self.domain if domain is ... else domain)

    def with_role(self, role: str) -> LatticeElement:
        """Reinterpret the coefficients under the basis duality of the cubic lattice."""
        return LatticeElement._wrap(self.spec, role, self._d, self.domain)

    def restrict(self, domain) -> LatticeElement:
        if self.spec.mode == PERIODIC or domain is None:
            return self
        dom = intersect_domains(self.domain, tuple(domain))
        d = {p: row for p, row in self._d.items() if _inside(p, dom)}
        return self._new(d, dom)

    # arithmetic

    def _check(self, other: LatticeElement):
        if self.spec != other.spec:
            raise ValueError("elements live on different lattices")
        if self.role != other.role:
            raise ValueError(f"cannot combine a {self.role} with a {other.role}")

    def __add__(self, other: LatticeElement) -> LatticeElement:
        if not isinstance(other, LatticeElement):
            return NotImplemented
        self._check(other)
        dom = intersect_domains(self.domain, other.domain)
        a = self if dom == self.domain else self.restrict(dom)
        b = other if dom == other.domain else other.restrict(dom)
        if not b._d:
            return a._new(a._d, dom)
        d = {p: dict(row) for p, row in a._d.items()}
        for p, row in b._d.items():
            target = d.get(p)
            if target is None:
                d[p] = dict(row)
                continue
            for m, c in row.items():
                s = target.get(m)
                s = c if s is None else s + c
                if s:
                    target[m] = s
                else:
                    target.pop(m, None)
            if not target:
                del d[p]
        return a._new(d, dom)

    def __neg__(self):
        return self._new({p: {m: -c for m, c in row.items()} for p, row in self._d.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, LatticeElement):
            return NotImplemented
        c = as_laurent(c)
        if not c:
            return self._new({})
        return self._new({p: {m: v * c for m, v in row.items()} for p, row in self._d.items()})

    __rmul__ = __mul__

    def map_coefficients(self, fn) -> LatticeElement:
        d = {}
        for p, row in self._d.items():
            new = {}
            for m, c in row.items():
                v = fn(c)
                if v:
                    new[m] = v
            if new:
                d[p] = new
        return self._new(d)

    def divide_by_h_power(self, k: int) -> LatticeElement:
        return self.map_coefficients(lambda c: c.divide_by_h_power(k))

    def __eq__(self, other):
        if not isinstance(other, LatticeElement):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.role == other.role
            and self.domain == other.domain
            and self._d == other._d
        )

    def __hash__(self):
        return hash((self.spec, self.role, self.domain, frozenset((c, v) for c, v in self.items())))

    def agrees_with(self, other: LatticeElement) -> bool:
        """Equality on the common domain (window mode) or exactly (periodic)."""
        self._check(other)
        dom = intersect_domains(self.domain, other.domain)
        return self.restrict(dom)._d == other.restrict(dom)._d

    def evaluate_at_scale(self, level: int) -> dict:
        """Exact numeric values ``{(mask, centre): Fraction}`` at ``h = 2**-level``."""
        return {(c.mask, c.center): v.evaluate_at_scale(level) for c, v in self.items()}

    # serialization

    def to_json(self) -> dict:
        entries = [
            {"type": axes_of(c.mask), "center": list(c.center), "coeff": v.to_json()}
            for c, v in sorted(self.items(), key=lambda cv: (cv[0].center, cv[0].mask))
        ]
        return {
            "n": self.spec.n,
            "mode": self.spec.mode,
            "role": self.role,
            "spec": self.spec.to_json(),
            "domain": [list(b) for b in self.domain] if self.domain else None,
            "entries": entries,
        }

    @classmethod
    def from_json(cls, data, spec: LatticeSpec | None = None) -> LatticeElement:
        if spec is None:
            spec = LatticeSpec.from_json(data["spec"]) if "spec" in data else LatticeSpec(n=data["n"], mode=data.get("mode", PERIODIC))
        cells = {}
        for e in data["entries"]:
            key = (mask_of(e["type"]), tuple(e["center"]))
            cells[key] = cells.get(key, ZERO) + LaurentH.from_json(e["coeff"])
        dom = data.get("domain")
        return cls(spec, data.get("role", COCHAIN), cells, tuple(tuple(b) for b in dom) if dom else None)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self):
        body = ", ".join(f"{axes_of(c.mask)}@{c.center}: {v}" for c, v in list(self.items())[:6])
        more = "" if len(self) <= 6 else f", ... ({len(self)} cells)"
        return f"LatticeElement({self.role}, {{{body}{more}}})"
