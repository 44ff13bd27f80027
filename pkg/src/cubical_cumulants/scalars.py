"""Exact coefficient arithmetic: rationals and Laurent polynomials in ``h``.

A :class:`LaurentH` is stored densely as ``(low, numerators, denominator)``
meaning ``sum(num[i] * h**(low + i)) / den``.  Integer numerators with a single
shared denominator keep the inner loops on Python ints, which matters because
lattice brackets multiply many of these.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction

#: Valuation of the zero element.
INF = math.inf

Number = Union[int, Fraction]

_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"n/d"`` or ``"n"`` exactly; decimals are refused."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _FRACTION_RE.match(text)
    if m is None:
        raise ValueError(f"not an exact rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class LaurentH:
    """Immutable Laurent polynomial in the formal scale variable ``h`` over Q."""

    __slots__ = ("_low", "_num", "_den", "_hash")

    def __init__(self, value: Number | LaurentH = 0):
        if isinstance(value, LaurentH):
            self._low, self._num, self._den = value._low, value._num, value._den
        else:
            q = Fraction(value)
            if q:
                self._low, self._num, self._den = 0, (q.numerator,), q.denominator
            else:
                self._low, self._num, self._den = 0, (), 1
        self._hash = None

    @classmethod
    def _raw(cls, low: int, num: tuple, den: int) -> LaurentH:
        obj = cls.__new__(cls)
        obj._low = low
        obj._num = num
        obj._den = den
        obj._hash = None
        return obj

    @classmethod
    def _make(cls, low: int, num: list | tuple, den: int) -> LaurentH:
        i, j = 0, len(num)
        while i < j and num[i] == 0:
            i += 1
        if i == j:
            return ZERO
        while num[j - 1] == 0:
            j -= 1
        if i or j != len(num):
            num = num[i:j]
            low += i
        if den < 0:
            den = -den
            num = [-c for c in num]
        g = math.gcd(den, *num)
        if g != 1:
            num = [c // g for c in num]
            den //= g
        return cls._raw(low, tuple(num), den)

    # constructors

    @classmethod
    def from_terms(cls, terms: Mapping[int, Number] | Iterable[tuple[int, Number]]) -> LaurentH:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), Fraction(0)) + Fraction(c)
        acc = {e: c for e, c in acc.items() if c}
        if not acc:
            return ZERO
        low, high = min(acc), max(acc)
        den = math.lcm(*(c.denominator for c in acc.values()))
        num = [0] * (high - low + 1)
        for e, c in acc.items():
            num[e - low] = c.numerator * (den // c.denominator)
        return cls._make(low, num, den)

    @classmethod
    def monomial(cls, coeff: Number, exponent: int) -> LaurentH:
        q = Fraction(coeff)
        if not q:
            return ZERO
        return cls._raw(exponent, (q.numerator,), q.denominator)

    @classmethod
    def h(cls, power: int = 1) -> LaurentH:
        return cls._raw(power, (1,), 1)

    # inspection

    def __bool__(self) -> bool:
        return bool(self._num)

    def is_zero(self) -> bool:
        return not self._num

    def valuation(self) -> int | float:
        return self._low if self._num else INF

    def degree(self) -> int | float:
        """Largest exponent present; ``-INF`` for zero."""
        return self._low + len(self._num) - 1 if self._num else -INF

    def terms(self) -> list[tuple[int, Fraction]]:
        return [
            (self._low + i, Fraction(c, self._den))
            for i, c in enumerate(self._num)
            if c
        ]

    def coefficient(self, exponent: int) -> Fraction:
        i = exponent - self._low
        if 0 <= i < len(self._num):
            return Fraction(self._num[i], self._den)
        return Fraction(0)

    def is_constant(self) -> bool:
        return not self._num or (self._low == 0 and len(self._num) == 1)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.coefficient(0)

    # arithmetic

    @staticmethod
    def _coerce(other) -> LaurentH | None:
        if isinstance(other, LaurentH):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentH(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._num:
            return self
        if not self._num:
            return o
        low = min(self._low, o._low)
        high = max(self._low + len(self._num), o._low + len(o._num))
        if self._den == o._den:
            den, fa, fb = self._den, 1, 1
        else:
            g = math.gcd(self._den, o._den)
            fa, fb = o._den // g, self._den // g
            den = self._den * fa
        acc = [0] * (high - low)
        off = self._low - low
        for i, c in enumerate(self._num):
            acc[off + i] = c * fa
        off = o._low - low
        for i, c in enumerate(o._num):
            acc[off + i] += c * fb
        return LaurentH._make(low, acc, den)

    __radd__ = __add__

    def __neg__(self):
        if not self._num:
            return self
        return LaurentH._raw(self._low, tuple(-c for c in self._num), self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._num, o._num
        if not a or not b:
            return ZERO
        if len(a) == 1 and len(b) == 1:
            c = a[0] * b[0]
            den = self._den * o._den
            g = math.gcd(c, den)
            if g != 1:
                c //= g
                den //= g
            return LaurentH._raw(self._low + o._low, (c,), den)
        acc = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    acc[i + j] += x * y
        return LaurentH._make(self._low + o._low, acc, self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> LaurentH:
        """Inverse of a monomial ``c*h**e``; other elements are not units."""
        if len(self._num) != 1:
            raise ZeroDivisionError(f"{self} is not a unit of Q[h, 1/h]")
        c = self._num[0]
        sign = 1 if c > 0 else -1
        return LaurentH._raw(-self._low, (sign * self._den,), abs(c))

    def divide_by_h_power(self, k: int) -> LaurentH:
        if not self._num:
            return self
        return LaurentH._raw(self._low - k, self._num, self._den)

    def evaluate(self, h_value: Number) -> Fraction:
        h_value = Fraction(h_value)
        if not self._num:
            return Fraction(0)
        total = Fraction(0)
        for e, c in self.terms():
            total += c * h_value**e
        return total

    def evaluate_at_scale(self, level: int) -> Fraction:
        if level < 0:
            raise ValueError("scale level must be non-negative")
        return self.evaluate(Fraction(1, 2**level))

    # comparison and hashing

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._num == o._num and (not self._num or (self._low == o._low and self._den == o._den))

    def __hash__(self):
        if self._hash is None:
            if not self._num:
                self._hash = hash(0)
            elif self._low == 0 and len(self._num) == 1:
                self._hash = hash(Fraction(self._num[0], self._den))
            else:
                self._hash = hash((self._low, self._num, self._den))
        return self._hash

    # serialization

    def to_json(self) -> dict:
        return {"terms": [[e, format_rational(c)] for e, c in self.terms()]}

    @classmethod
    def from_json(cls, data) -> LaurentH:
        if isinstance(data, (int, str)):
            return cls(parse_rational(data))
        if not isinstance(data, dict) or "terms" not in data:
            raise ValueError(f"bad LaurentH payload: {data!r}")
        return cls.from_terms((int(e), parse_rational(c)) for e, c in data["terms"])

    def __repr__(self):
        return f"LaurentH({self})"

    def __str__(self):
        if not self._num:
            return "0"
        parts = []
        for e, c in self.terms():
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                hp = "h" if e == 1 else f"h^{e}"
                body = hp if mag == 1 else f"{mag}*{hp}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = LaurentH._raw(0, (), 1)
ONE = LaurentH._raw(0, (1,), 1)
H = LaurentH.h()


def as_laurent(x: Number | LaurentH) -> LaurentH:
    return x if isinstance(x, LaurentH) else LaurentH(x)


def valuation(x: LaurentH) -> int | float:
    return as_laurent(x).valuation()


def evaluate_at_scale(x: LaurentH, level: int) -> Fraction:
    return as_laurent(x).evaluate_at_scale(level)


def divide_by_h_power(x: LaurentH, k: int) -> LaurentH:
    return as_laurent(x).divide_by_h_power(k)
