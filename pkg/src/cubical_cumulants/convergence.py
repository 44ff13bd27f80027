"""Numeric convergence of the normalized lattice operators as the step halves."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from .brackets import delta_bracket_closed, partial_bracket_closed
from .continuum import Multivector, exterior_derivative, schouten
from .lattice.element import CHAIN, COCHAIN, LatticeElement
from .lattice.operators import coboundary
from .lattice.sampling import PolynomialField, random_field, sample_polynomial
from .lattice.spec import LatticeSpec

#: extra window cells beyond the measured region, enough for the widest stencil used
MARGIN = 4


def window_at_level(n: int, level: int, region: Fraction) -> tuple[LatticeSpec, int]:
    reach = int(region * 2**level)
    return LatticeSpec.window(n, reach + MARGIN, level=level), reach


def sup_error(x: LatticeElement, reference: PolynomialField | None, reach: int) -> Fraction:
    """``max |x - reference|`` over cells centred in ``[-reach, reach]^n`` (at the sample scale)."""
    spec = x.spec
    h = Fraction(1, 2**spec.level) * spec.step
    masks = set(x.masks()) | (set(reference.terms) if reference else set())
    worst = Fraction(0)
    box = tuple((-reach, reach) for _ in range(spec.n))
    for p in spec.points(box):
        if x.domain is not None and not all(lo <= c <= hi for c, (lo, hi) in zip(p, x.domain)):
            raise ValueError("measured region leaves the operator's domain; enlarge the margin")
        for m in masks:
            v = x.get(m, p).constant_value()
            if reference is not None:
                v -= reference.value(m, [c * h for c in p])
            worst = max(worst, abs(v))
    return worst


def fit_rates(norms: Sequence[Fraction]) -> list:
    """``log2(e_i / e_{i+1})``; ``inf`` when the finer error is exactly zero, ``None`` if both are."""
    rates = []
    for a, b in zip(norms, norms[1:]):
        if a == 0 and b == 0:
            rates.append(None)
        elif b == 0:
            rates.append(math.inf)
        elif a == 0:
            rates.append(-math.inf)
        else:
            rates.append(math.log2(a / b))
    return rates


def rate_ok(rates, minimum: float = 1.0, tolerance: float = 0.1) -> bool:
    return all(r is None or r >= minimum - tolerance for r in rates)


def default_fields(rng: random.Random, n: int, degree: int) -> dict:
    """Fixed random polynomial data for each study item."""
    return {
        "f": random_field(rng, n, degree, masks=[0], terms=4),
        "g": random_field(rng, n, degree, masks=[0], terms=4),
        "form": random_field(rng, n, degree, homogeneous=False, terms=3),
        "chains": [random_field(rng, n, degree, homogeneous=False, terms=3) for _ in range(3)],
    }


def convergence_study(
    n: int, levels: Sequence[int], degree: int = 3, seed: int = 0, region: Fraction = Fraction(1, 4), fields: dict | None = None
) -> dict:
    if len(levels) < 3:
        raise ValueError("a convergence study needs at least three levels")
    rng = random.Random(seed)
    fields = fields or default_fields(rng, n, degree)
    f, g, form, chains = fields["f"], fields["g"], fields["form"], fields["chains"]
    X, Y = Multivector.from_field(chains[0]), Multivector.from_field(chains[1])
    bracket_ref = schouten(X, Y).to_field()
    d_ref = PolynomialField(n, {})
    for mask in form.terms:
        part = exterior_derivative(PolynomialField(n, {mask: form.terms[mask]}), mask)
        d_ref = _add_fields(d_ref, part)
    series = {"delta2": [], "partial3": [], "delta1_vs_d": [], "partial2_vs_schouten": []}
    for level in levels:
        spec, reach = window_at_level(n, level, region)
        fs, gs = sample_polynomial(spec, f, COCHAIN), sample_polynomial(spec, g, COCHAIN)
        series["delta2"].append(sup_error(delta_bracket_closed([fs, gs]), None, reach))
        cs = [sample_polynomial(spec, c, CHAIN) for c in chains]
        series["partial3"].append(sup_error(partial_bracket_closed(cs), None, reach))
        w = sample_polynomial(spec, form, COCHAIN)
        d1 = coboundary(w) * (spec.h * 2).inverse()
        series["delta1_vs_d"].append(sup_error(d1, d_ref, reach))
        series["partial2_vs_schouten"].append(sup_error(partial_bracket_closed(cs[:2]), bracket_ref, reach))
    out = {}
    for name, norms in series.items():
        rates = fit_rates(norms)
        out[name] = {
            "norms": [float(x) for x in norms],
            "norms_exact": [f"{x.numerator}/{x.denominator}" for x in norms],
            "rates": [None if r is None else (("inf" if r > 0 else "-inf") if math.isinf(r) else round(r, 6)) for r in rates],
            "pass": rate_ok(rates),
        }
    return out


def _add_fields(a: PolynomialField, b: PolynomialField) -> PolynomialField:
    terms = {m: dict(p) for m, p in a.terms.items()}
    for m, p in b.terms.items():
        t = terms.setdefault(m, {})
        for e, c in p.items():
            t[e] = t.get(e, Fraction(0)) + c
    return PolynomialField(a.n, terms)
