"""The ten acceptance criteria, each at its stated size and time limit."""

from __future__ import annotations

import random
import time

import pytest
from conftest import ACCEPTANCE_LINES

from cubical_cumulants import suites
from cubical_cumulants.convergence import convergence_study


def crit_tau():
    return suites.tau_suite(random.Random(11), words=200, max_len=5)


def crit_brackets():
    return suites.bracket_suite(random.Random(12), inputs=100, k_max=4)


def crit_surjections():
    return suites.surjection_suite(10)


def crit_lattice():
    rng = random.Random(14)
    out = []
    for n in (1, 2, 3):
        out += suites.lattice_suite(rng, (n,), N=1, samples=100)
    return out


def crit_homology():
    return suites.homology_suite((1, 2, 3), N=1)


def crit_closed_forms():
    return suites.bracket_oracle_suite(random.Random(16), (1, 2), N=1, datasets=50, k_max=4)


def crit_valuations():
    return suites.valuation_suite(random.Random(17), (1, 2), samples=20, degree=4, k_max=4)


def crit_scale_maps():
    return suites.multiscale_maps_suite((1, 2), N=2)


def crit_sigma():
    return suites.sigma_suite(random.Random(19), (1, 2), k_max=4, samples=6, degree=3, order_max=3, route_trials=40)


def crit_convergence():
    out = []
    for n in (1, 2):
        study = convergence_study(n, [3, 4, 5, 6], degree=3, seed=20)
        for name, row in study.items():
            out.append(suites.check("converge", f"{name}_n{n}", name, row["pass"], rates=row["rates"]))
    return out


CRITERIA = [
    ("cumulant bijection roundtrip and coalgebra map", crit_tau, 10),
    ("bracket triple agreement and D o D = 0", crit_brackets, 30),
    ("alternating surjection sum", crit_surjections, 1),
    ("lattice operator identities", crit_lattice, 60),
    ("degree-zero homology rank 2^n", crit_homology, 30),
    ("closed-form brackets equal generic brackets", crit_closed_forms, 300),
    ("binary field theory valuations", crit_valuations, 300),
    ("integration and crumbling maps", crit_scale_maps, 60),
    ("scale cumulant checks", crit_sigma, 600),
    ("numeric convergence rates", crit_convergence, 300),
]


@pytest.mark.parametrize("index", range(len(CRITERIA)), ids=[f"criterion{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(index):
    name, fn, limit = CRITERIA[index]
    start = time.perf_counter()
    checks = fn()
    elapsed = time.perf_counter() - start
    failed = [c["id"] for c in checks if not c["pass"]]
    ok = not failed and elapsed < limit
    line = f"[{'PASS' if ok else 'FAIL'}] {index + 1:2d}. {name}: {len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.1f}s (limit {limit}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, failed
    assert elapsed < limit
