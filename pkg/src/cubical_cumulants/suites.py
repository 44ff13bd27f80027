"""Verification suites shared by the CLI and the acceptance tests.

Each suite returns a list of check records ``{"id", "suite", "anchor", "pass", "detail"}``.
``anchor`` names the claim being checked in plain words.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Sequence

from .brackets import (
    binary_qft_check,
    closed_bracket,
)
from .coalgebra.algebra import (
    GradedBasisAlgebra,
    check_algebra_axioms,
    random_dg_algebra,
    random_grade_preserving_map,
    random_vector,
    tensor_algebra,
    tensor_map,
    tensor_vector,
)
from .coalgebra.combinatorics import surjection_count
from .coalgebra.symmetric import (
    SymElement,
    conjugated_coderivation,
    reduced_coproduct,
    tau,
    tau_inv,
    tensor_apply,
)
from .coalgebra.taylor import (
    coderivation_from_brackets,
    taylor_bracket_conjugation,
    taylor_bracket_direct,
    taylor_bracket_recursive,
)
from .lattice.algebra import LatticeAlgebra, random_element, to_basis_algebra, to_vector
from .lattice.element import CHAIN, COCHAIN, LatticeElement
from .lattice.homology import homology_rank_degree0
from .lattice.operators import (
    boundary,
    boundary_u,
    coboundary,
    coboundary_u,
    idbar,
    interior_product,
    star,
    star_bar,
    translate,
    wedge,
)
from .lattice.sampling import random_field
from .lattice.spec import LatticeSpec, WindowOverflowError
from .multiscale import (
    ScalePair,
    intertwine_check,
    sigma_composed,
    sigma_cumulant,
    sigma_divisibility_check,
    sigma_recursive,
    tensor_cumulant,
)


def check(suite: str, cid: str, anchor: str, passed: bool, **detail) -> dict:
    return {"id": f"{suite}.{cid}", "suite": suite, "anchor": anchor, "pass": bool(passed), "detail": detail}


def guarded(suite: str, cid: str, anchor: str, fn) -> list[dict]:
    """Run ``fn``; a window overflow becomes a named failing check instead of a crash."""
    try:
        return fn()
    except WindowOverflowError as exc:
        return [check(suite, cid, anchor, False, error=f"window overflow: {exc}")]


def _random_word(rng: random.Random, alg: GradedBasisAlgebra, max_len: int) -> SymElement:
    while True:
        length = rng.randint(1, max_len)
        x = SymElement.word(alg, [rng.randrange(alg.dim) for _ in range(length)])
        if x:
            return x


# coalgebra core


def coalgebra_suite(rng: random.Random, words: int = 200, max_len: int = 5, bracket_inputs: int = 100, k_max: int = 4) -> list[dict]:
    return tau_suite(rng, words, max_len) + bracket_suite(rng, bracket_inputs, k_max)


def tau_suite(rng: random.Random, words: int = 200, max_len: int = 5) -> list[dict]:
    S = "coalgebra"
    roundtrip = comap = 0
    for _ in range(words):
        alg = random_dg_algebra(rng)
        x = _random_word(rng, alg, max_len)
        if tau(alg, tau_inv(alg, x)) != x or tau_inv(alg, tau(alg, x)) != x:
            roundtrip += 1
        t = reduced_coproduct(alg, x)
        if tensor_apply(alg, [lambda y: tau(alg, y)] * 2, t) != reduced_coproduct(alg, tau(alg, x)):
            comap += 1
    out = [
        check(S, "tau_roundtrip", "cumulant bijection: tau o tau^-1 = tau^-1 o tau = id", roundtrip == 0, words=words, failures=roundtrip),
        check(S, "tau_coalgebra_map", "cumulant bijection commutes with the reduced coproduct", comap == 0, words=words, failures=comap),
    ]
    return out


def bracket_suite(rng: random.Random, inputs: int = 100, k_max: int = 4) -> list[dict]:
    S = "coalgebra"
    routes = dsq = coder = 0
    for _ in range(inputs):
        alg = random_dg_algebra(rng, max_generators=3)
        k = rng.randint(1, k_max)
        vs = [random_vector(rng, alg, terms=2) for _ in range(k)]
        a = taylor_bracket_conjugation(alg, k)(vs)
        b = taylor_bracket_direct(alg, k)(vs)
        c = taylor_bracket_recursive(alg, k)(vs) if k >= 2 else alg.d(vs[0])
        if not (a == b == c):
            routes += 1
        x = _random_word(rng, alg, 4)
        if conjugated_coderivation(alg, conjugated_coderivation(alg, x)):
            dsq += 1
        if coderivation_from_brackets(alg, x) != conjugated_coderivation(alg, x):
            coder += 1
    return [
        check(S, "bracket_routes", "Taylor brackets by conjugation, subset sum and recursion coincide", routes == 0, inputs=inputs, failures=routes),
        check(S, "D_squared", "the conjugated coderivation squares to zero", dsq == 0, inputs=inputs, failures=dsq),
        check(S, "coderivation_sum", "the coderivation is the sum of its bracket extensions", coder == 0, inputs=inputs, failures=coder),
    ]


def surjection_suite(s_max: int = 10) -> list[dict]:
    sums = {s: sum((-1) ** (s - t) * surjection_count(s, t) for t in range(1, s + 1)) for s in range(1, s_max + 1)}
    return [check("coalgebra", "surjection_sum", "alternating sum of surjection counts is 1", all(v == 1 for v in sums.values()), sums=sums)]


def corrupt_products(alg: GradedBasisAlgebra) -> GradedBasisAlgebra:
    """Double one nonunit structure constant, for the negative control."""
    products = dict(alg.products)
    key = next(k for k in sorted(products) if 0 not in k)
    products[key] = products[key] * 2
    return alg.with_products(products)


def axioms_suite(rng: random.Random, algebras: int = 10, corrupt: bool = False) -> list[dict]:
    S = "coalgebra"
    pool = [random_dg_algebra(rng, max_generators=3) for _ in range(algebras)]
    lattice_alg, _ = to_basis_algebra(LatticeSpec(2, 1), "delta/2h")
    pool.append(lattice_alg)
    if corrupt:
        base = next((a for a in pool if any(0 not in k for k in a.products)), None)
        if base is None:
            base = random_dg_algebra(random.Random(0), max_generators=3)
        pool.append(corrupt_products(base))
    witnesses = []
    for i, alg in enumerate(pool):
        for v in check_algebra_axioms(alg, limit=3):
            witnesses.append({"algebra": i, **v.to_json()})
    return [check(S, "algebra_axioms", "inputs are graded-commutative associative algebras with square-zero differential", not witnesses, algebras=len(pool), witnesses=witnesses[:10])]


# lattice


def _graded_commutator_ok(x: LatticeElement, y: LatticeElement) -> bool:
    swapped = None
    for p, xp in x.degree_parts().items():
        for q, yq in y.degree_parts().items():
            term = wedge(yq, xp) * (-1) ** (p * q)
            swapped = term if swapped is None else swapped + term
    if swapped is None:
        return not wedge(x, y)
    return wedge(x, y).agrees_with(swapped)


def lattice_suite(
    rng: random.Random, ns: Sequence[int] = (1, 2, 3), N: int = 1, samples: int = 100, cells: int = 5, mode: str = "periodic", radius: int = 4
) -> list[dict]:
    """Operator identities on random elements; window mode compares on the common domain."""
    S = "lattice"
    eq = lambda a, b: a.agrees_with(b)  # noqa: E731
    T = lambda x, u: translate(x, u, True)  # noqa: E731
    Tp = lambda x, u: translate(x, u, False)  # noqa: E731
    identities = {
        "star_conjugates_boundary": "coboundary after star-bar equals star after boundary",
        "boundary_after_star": "boundary after star equals star-bar after coboundary",
        "shifted_leibniz": "coboundary obeys a shifted Leibniz rule",
        "shifted_leibniz_opposite": "the Leibniz rule also holds with the shifts exchanged",
        "interior_shift_forward": "shifted interior product is a twisted derivation (forward shift)",
        "interior_shift_backward": "shifted interior product is a twisted derivation (backward shift)",
        "boundary_squared": "boundary squares to zero",
        "coboundary_squared": "coboundary squares to zero",
        "star_squared": "star squared is (-1)^(k(n-k)) on degree k",
        "wedge_commutative": "wedge product is graded commutative",
        "wedge_associative": "wedge product is associative",
    }
    fails = {k: 0 for k in identities}
    for i in range(samples):
        n = ns[i % len(ns)]
        spec = LatticeSpec(n, N) if mode == "periodic" else LatticeSpec.window(n, radius)
        x, y, z = (random_element(rng, spec, COCHAIN, cells) for _ in range(3))
        u = rng.randrange(n)
        c, cy = x.with_role(CHAIN), y.with_role(CHAIN)
        results = {
            "star_conjugates_boundary": eq(coboundary_u(star_bar(x), u), star(boundary_u(x, u))),
            "boundary_after_star": eq(boundary_u(star(x), u), star_bar(coboundary_u(x, u))),
            "shifted_leibniz": eq(coboundary_u(wedge(x, y), u), wedge(coboundary_u(x, u), Tp(y, u)) + wedge(idbar(T(x, u)), coboundary_u(y, u))),
            "shifted_leibniz_opposite": eq(coboundary_u(wedge(x, y), u), wedge(coboundary_u(x, u), T(y, u)) + wedge(idbar(Tp(x, u)), coboundary_u(y, u))),
            "interior_shift_forward": eq(
                T(interior_product(wedge(c, cy), u), u),
                wedge(T(interior_product(c, u), u), T(cy, u)) + wedge(T(idbar(c), u), T(interior_product(cy, u), u)),
            ),
            "interior_shift_backward": eq(
                Tp(interior_product(wedge(c, cy), u), u),
                wedge(Tp(interior_product(c, u), u), Tp(cy, u)) + wedge(Tp(idbar(c), u), Tp(interior_product(cy, u), u)),
            ),
            "boundary_squared": not boundary(boundary(c)),
            "coboundary_squared": not coboundary(coboundary(x)),
            "star_squared": all(eq(star(star(p)), p * (-1) ** (k * (n - k))) for k, p in x.degree_parts().items()),
            "wedge_commutative": _graded_commutator_ok(x, y),
            "wedge_associative": eq(wedge(wedge(x, y), z), wedge(x, wedge(y, z))),
        }
        for key, ok in results.items():
            if not ok:
                fails[key] += 1
    return [check(S, key, identities[key], fails[key] == 0, samples=samples, ns=list(ns), N=N, mode=mode, failures=fails[key]) for key in identities]


def homology_suite(ns: Sequence[int] = (1, 2, 3), N: int = 1) -> list[dict]:
    out = []
    for n in ns:
        rank = homology_rank_degree0(LatticeSpec(n, N))
        out.append(check("lattice", f"homology_degree0_n{n}", "degree-zero homology has rank 2^n", rank == 2**n, n=n, N=N, rank=rank, expected=2**n))
    return out


# brackets


def bracket_oracle_suite(rng: random.Random, ns: Sequence[int] = (1, 2), N: int = 1, datasets: int = 50, k_max: int = 4, cells: int = 3) -> list[dict]:
    """Closed forms against the generic subset-sum and recursive routes, and the conjugation route on sparse data."""
    S = "brackets"
    fails = {"delta/2h": 0, "partial/2h": 0}
    conj_fails = 0
    basis_cache = {}
    for i in range(datasets):
        n = ns[i % len(ns)]
        spec = LatticeSpec(n, N)
        k = 1 + i % k_max
        for norm in fails:
            role = COCHAIN if norm.startswith("delta") else CHAIN
            els = [random_element(rng, spec, role, cells) for _ in range(k)]
            u = rng.choice([None] + list(range(n)))
            alg = LatticeAlgebra(spec, norm, u)
            closed = closed_bracket(norm)(els, u)
            direct = taylor_bracket_direct(alg, k)(els)
            rec = taylor_bracket_recursive(alg, k)(els) if k >= 2 else alg.d(els[0])
            if not (closed == direct == rec):
                fails[norm] += 1
            if n == 1 and k <= 3:
                key = (n, norm, u)
                if key not in basis_cache:
                    basis_cache[key] = to_basis_algebra(spec, norm, u)
                balg, index = basis_cache[key]
                sparse = [random_element(rng, spec, role, 2) for _ in range(k)]
                lhs = taylor_bracket_conjugation(balg, k)([to_vector(e, index) for e in sparse])
                if lhs != to_vector(closed_bracket(norm)(sparse, u), index):
                    conj_fails += 1
    out = [
        check(S, "closed_form_delta", "closed-form cochain brackets equal the generic Taylor brackets", fails["delta/2h"] == 0, datasets=datasets, k_max=k_max, failures=fails["delta/2h"]),
        check(S, "closed_form_partial", "closed-form chain brackets equal the generic Taylor brackets", fails["partial/2h"] == 0, datasets=datasets, k_max=k_max, failures=fails["partial/2h"]),
        check(S, "closed_form_conjugation", "closed forms equal brackets obtained by conjugating with the cumulant bijection", conj_fails == 0, failures=conj_fails),
    ]
    return out


def valuation_suite(
    rng: random.Random,
    ns: Sequence[int] = (1, 2),
    samples: int = 20,
    degree: int = 4,
    k_max: int = 4,
    radius: int = 8,
    normalizations: Sequence[str] = ("delta/2h", "partial/2h"),
) -> list[dict]:
    """Binary quantum field theory bounds on formal polynomial samples."""
    out = []
    for n in ns:
        spec = LatticeSpec.window(n, radius)
        fields = [random_field(rng, n, degree, homogeneous=False, terms=3) for _ in range(samples)]
        for norm in normalizations:

            def run(norm=norm, spec=spec, fields=fields, n=n):
                rows = binary_qft_check(spec, norm, k_max, fields, route="closed", per_direction=False)
                return [
                    check(
                        "brackets",
                        f"valuation_{norm.replace('/', '_')}_n{n}_k{r['k']}",
                        "normalized k-brackets are divisible by the expected power of h",
                        r["pass"],
                        **{key: r[key] for key in ("normalization", "k", "min_valuation", "bound", "witness")},
                        n=n,
                        samples=samples,
                    )
                    for r in rows
                ]

            out += guarded("brackets", f"valuation_{norm.replace('/', '_')}_n{n}", "normalized k-brackets are divisible by the expected power of h", run)
    return out


# multiscale


def multiscale_maps_suite(ns: Sequence[int] = (1, 2), N: int = 2) -> list[dict]:
    S = "multiscale"
    out = []
    for n in ns:
        pair = ScalePair.periodic(n, N)
        cm = pair.chain_map_failures()
        cs = pair.cochain_scaling_failures()
        du = pair.duality_failures()
        out += [
            check(S, f"crumble_chain_map_n{n}", "crumbling commutes with the boundary", not cm, n=n, N=N, failures=[list(c) for c in cm[:5]]),
            check(S, f"integrate_scaling_n{n}", "half the coarse coboundary after integration equals integration after the coboundary", not cs, n=n, N=N, failures=[list(c) for c in cs[:5]]),
            check(S, f"duality_n{n}", "integration is dual to crumbling under the volume-weighted pairing", not du, n=n, N=N, failures=len(du)),
        ]
    return out


def _sigma_route_checks(rng: random.Random, k_max: int, trials: int) -> tuple[int, int]:
    """Partition formula vs recursion vs composed coalgebra map, on random graded maps."""
    route_fail = tensor_fail = 0
    for t in range(trials):
        A = random_dg_algebra(rng, max_generators=3)
        B = random_dg_algebra(rng, max_generators=3)
        f = random_grade_preserving_map(rng, A, B)
        k = 1 + t % k_max
        vs = [random_vector(rng, A, terms=2) for _ in range(k)]
        a = sigma_cumulant(A, B, f, k)(vs)
        b = sigma_recursive(A, B, f, k)(vs)
        c = sigma_composed(f, k)(vs)
        if not (a == b == c):
            route_fail += 1
        kt = 1 + t % 3
        V, W, Vb, Wb = (random_dg_algebra(rng, max_generators=2, differential_degree=1) for _ in range(4))
        fV, fW = random_grade_preserving_map(rng, V, Vb), random_grade_preserving_map(rng, W, Wb)
        pairs = [(random_vector(rng, V, 1, True), random_vector(rng, W, 1, True)) for _ in range(kt)]
        VW, VWb = tensor_algebra(V, W), tensor_algebra(Vb, Wb)
        direct = sigma_cumulant(VW, VWb, tensor_map(fV, fW), kt)([tensor_vector(v, w, W.dim) for v, w in pairs])
        if tensor_cumulant(fV, fW, pairs) != direct:
            tensor_fail += 1
    return route_fail, tensor_fail


def sigma_suite(
    rng: random.Random,
    ns: Sequence[int] = (1, 2),
    k_max: int = 4,
    samples: int = 6,
    degree: int = 3,
    order_max: int = 3,
    route_trials: int = 40,
    radius: int = 8,
    include_chain: bool = True,
) -> list[dict]:
    S = "multiscale"
    route_fail, tensor_fail = _sigma_route_checks(rng, k_max, route_trials)
    out = [
        check(S, "sigma_routes", "cumulants of a linear map agree by partition sum, recursion and coalgebra conjugation", route_fail == 0, trials=route_trials, failures=route_fail),
        check(S, "sigma_tensor", "cumulants of a tensor product map obey the partition formula", tensor_fail == 0, trials=route_trials, failures=tensor_fail),
    ]
    for n in ns:
        pair = ScalePair.window(n, radius)
        fields = [random_field(rng, n, degree, homogeneous=False, terms=3) for _ in range(samples)]

        def run(pair=pair, fields=fields, n=n):
            rows = sigma_divisibility_check(pair, k_max, fields, "cochain")
            return [
                check(S, f"sigma_valuation_cochain_n{n}_k{r['k']}", "cumulants of integration are divisible by h^(k-1) and vanish on points", r["pass"], n=n, **{k: v for k, v in r.items() if k != "pass"})
                for r in rows
            ]

        out += guarded(S, f"sigma_valuation_cochain_n{n}", "cumulants of integration are divisible by h^(k-1) and vanish on points", run)
        if include_chain:

            def run_chain(pair=pair, fields=fields, n=n):
                rows = sigma_divisibility_check(pair, min(k_max, 3), fields, "chain")
                # observed only: recorded, never failing
                return [
                    check(S, f"sigma_valuation_chain_n{n}_k{r['k']}", "cumulants of crumbling (observed valuation, not asserted)", True, n=n, **r)
                    for r in rows
                ]

            out += guarded(S, f"sigma_valuation_chain_n{n}", "cumulants of crumbling (observed valuation, not asserted)", run_chain)
    pair = ScalePair.periodic(1, 2)
    for r in intertwine_check(pair, order_max, rng, trials=2, cells=12):
        out.append(check(S, f"intertwine_order{r['order']}_{r['form']}", "integration cumulants intertwine the normalized coderivations", r["pass"], **r))
    return out
