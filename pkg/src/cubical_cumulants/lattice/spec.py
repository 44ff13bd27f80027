"""Lattice geometry: specs, cells and orientation signs.

Coordinates are integers in units of the lattice step.  Axes are 0-based and a
cell type is a bitmask over axes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import Iterator, NamedTuple

from ..scalars import LaurentH

PERIODIC = "periodic"
WINDOW = "window"


class WindowOverflowError(ValueError):
    """A stencil left the window, or two domains had no overlap."""


class Cell(NamedTuple):
    mask: int
    center: tuple


def popcount(m: int) -> int:
    return bin(m).count("1")


def axes_of(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if (mask >> i) & 1]


def mask_of(axes) -> int:
    m = 0
    for a in axes:
        m |= 1 << a
    return m


def pm_pair(J: int, K: int) -> int:
    """``+-_{J,K}``: the sign with ``J . K = +-(J u K)`` for disjoint masks."""
    parity = 0
    for j in axes_of(J):
        parity += popcount(K & ((1 << j) - 1))
    return -1 if parity & 1 else 1


def pm_axis(u: int, I: int) -> int:
    """``+-^u_I = (-1)^{#{i in I : i < u}}``."""
    return -1 if popcount(I & ((1 << u) - 1)) & 1 else 1


@dataclass(frozen=True)
class LatticeSpec:
    """An ``n``-dimensional cubical lattice.

    ``periodic`` lattices have side ``4N`` steps.  ``window`` lattices are the
    box ``bounds`` of the infinite lattice; elements there carry a domain of
    validity.  ``level=None`` means a formal step; otherwise the step is the
    number ``2**-level`` (times ``step``).  ``step`` is the edge multiplier
    used for coarse lattices: step 2 means spacing ``2h``.
    """

    n: int
    N: int = 1
    mode: str = PERIODIC
    bounds: tuple | None = None
    level: int | None = None
    step: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.mode not in (PERIODIC, WINDOW):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.level is not None and self.level < 0:
            raise ValueError("level must be non-negative")
        if self.mode == WINDOW:
            b = self.bounds if self.bounds is not None else ((-6, 6),) * self.n
            b = tuple((int(lo), int(hi)) for lo, hi in b)
            if len(b) != self.n or any(lo > hi for lo, hi in b):
                raise ValueError(f"bad window bounds {b}")
            object.__setattr__(self, "bounds", b)
        else:
            object.__setattr__(self, "bounds", None)

    @classmethod
    def window(cls, n: int, radius: int = 6, level: int | None = None, step: int = 1) -> LatticeSpec:
        return cls(n=n, mode=WINDOW, bounds=((-radius, radius),) * n, level=level, step=step)

    @property
    def period(self) -> int:
        return 4 * self.N

    @property
    def formal(self) -> bool:
        return self.level is None

    @property
    def h(self) -> LaurentH:
        """The lattice spacing as a scalar."""
        if self.level is None:
            return LaurentH.monomial(self.step, 1)
        return LaurentH(Fraction(self.step, 2**self.level))

    def normalize(self, center) -> tuple:
        if self.mode == PERIODIC:
            p = self.period
            return tuple(c % p for c in center)
        return tuple(center)

    def in_window(self, center) -> bool:
        if self.mode == PERIODIC:
            return True
        return all(lo <= c <= hi for c, (lo, hi) in zip(center, self.bounds))

    def points(self, domain=None) -> Iterator[tuple]:
        if self.mode == PERIODIC:
            return product(range(self.period), repeat=self.n)
        box = domain if domain is not None else self.bounds
        return product(*(range(lo, hi + 1) for lo, hi in box))

    def cells(self) -> Iterator[Cell]:
        for p in self.points():
            for m in range(1 << self.n):
                yield Cell(m, p)

    def num_points(self) -> int:
        if self.mode == PERIODIC:
            return self.period**self.n
        out = 1
        for lo, hi in self.bounds:
            out *= hi - lo + 1
        return out

    def coarse(self) -> LatticeSpec:
        """The sublattice of even vertices, in its own (doubled) step units."""
        if self.mode == PERIODIC:
            if self.N % 2:
                raise ValueError("coarsening a periodic lattice needs even N")
            return replace(self, N=self.N // 2, step=self.step * 2)
        # coarse centres whose whole fine stencil [2c-2, 2c+1] is inside the window
        b = tuple((-((-(lo + 2)) // 2), (hi - 1) // 2) for lo, hi in self.bounds)
        if any(lo > hi for lo, hi in b):
            raise WindowOverflowError("window too small to coarsen")
        return replace(self, bounds=b, step=self.step * 2)

    def at_level(self, level: int | None) -> LatticeSpec:
        return replace(self, level=level)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "mode": self.mode,
            "bounds": [list(b) for b in self.bounds] if self.bounds else None,
            "level": self.level,
            "step": self.step,
        }

    @classmethod
    def from_json(cls, data) -> LatticeSpec:
        bounds = data.get("bounds")
        return cls(
            n=data["n"],
            N=data.get("N", 1),
            mode=data.get("mode", PERIODIC),
            bounds=tuple(tuple(b) for b in bounds) if bounds else None,
            level=data.get("level"),
            step=data.get("step", 1),
        )
