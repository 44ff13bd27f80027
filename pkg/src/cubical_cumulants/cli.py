"""Command line driver: ``verify``, ``converge`` and ``report``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import suites
from .convergence import convergence_study

SCHEMA = "cubical-cumulants-report"
SCHEMA_VERSION = 1
OUTPUT_ENV = "CUBECUM_OUTPUT_DIR"


class ReportError(ValueError):
    pass


def _output_path(args, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUTPUT_ENV, ".")) / default_name


def _config(args) -> dict:
    keys = ("command", "n", "N", "mode", "radius", "kmax", "degree", "samples", "seed", "levels", "corrupt_products")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _write(report: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report))


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _envelope(command: str, config: dict, checks: list[dict]) -> dict:
    failed = [c["id"] for c in checks if not c["pass"]]
    return {
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "checks": sorted(checks, key=lambda c: c["id"]),
        "summary": {"total": len(checks), "passed": len(checks) - len(failed), "failed": failed},
    }


def _table(checks: list[dict]) -> str:
    width = max((len(c["id"]) for c in checks), default=10)
    rows = [f"{'check'.ljust(width)}  status  claim"]
    for c in checks:
        rows.append(f"{c['id'].ljust(width)}  {'pass' if c['pass'] else 'FAIL':6}  {c['anchor']}")
    return "\n".join(rows)


# verify


def run_verify(args) -> dict:
    if args.n < 1 or args.n > 3:
        raise SystemExit("--n must be 1, 2 or 3")
    if args.N < 1:
        raise SystemExit("--N must be positive")
    if args.kmax < 2:
        raise SystemExit("--kmax must be at least 2")
    rng = random.Random(args.seed)
    ns = tuple(range(1, args.n + 1))
    small = tuple(n for n in ns if n <= 2)
    N2 = args.N if args.N % 2 == 0 else 2 * args.N
    k = min(args.kmax, 4)
    checks = []
    checks += suites.coalgebra_suite(rng, words=args.samples * 10, bracket_inputs=args.samples * 5, k_max=k)
    checks += suites.surjection_suite(10)
    checks += suites.axioms_suite(rng, corrupt=args.corrupt_products)
    checks += suites.lattice_suite(rng, ns, args.N, samples=args.samples * 5, mode=args.mode, radius=args.radius)
    checks += suites.homology_suite(ns, args.N)
    checks += suites.bracket_oracle_suite(rng, small, args.N, datasets=args.samples * 2, k_max=k)
    checks += suites.valuation_suite(rng, small, samples=args.samples, degree=args.degree, k_max=k, radius=max(args.radius, 8), normalizations=("delta/2h", "partial/2h", "partial"))
    checks += suites.multiscale_maps_suite(small, N2)
    checks += suites.sigma_suite(rng, small, k_max=min(k, 3), samples=min(args.samples, 6), degree=min(args.degree, 3), route_trials=args.samples * 2)
    return _envelope("verify", _config(args), checks)


# converge


def run_converge(args) -> dict:
    levels = args.levels or [3, 4, 5]
    if len(levels) < 3:
        raise SystemExit("converge needs at least three levels")
    study = convergence_study(args.n, levels, degree=args.degree, seed=args.seed, region=Fraction(1, 4))
    anchors = {
        "delta2": "normalized binary cochain bracket tends to zero",
        "partial3": "normalized ternary chain bracket tends to zero",
        "delta1_vs_d": "normalized coboundary converges to the exterior derivative",
        "partial2_vs_schouten": "normalized binary chain bracket converges to the Schouten bracket",
    }
    checks = [suites.check("converge", name, anchors[name], row["pass"], levels=levels, **{k: v for k, v in row.items() if k != "pass"}) for name, row in study.items()]
    return _envelope("converge", _config(args), checks)


# report


def merge_reports(paths: list[str]) -> dict:
    seen: dict[str, tuple[str, dict]] = {}
    commands = []
    for path in paths:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ReportError(f"{path}: cannot read report ({exc})") from exc
        if data.get("schema") != SCHEMA or data.get("version") != SCHEMA_VERSION:
            raise ReportError(f"{path}: schema mismatch (expected {SCHEMA} v{SCHEMA_VERSION})")
        commands.append({"source": str(path), "command": data.get("command"), "config": data.get("config")})
        for c in data["checks"]:
            prev = seen.get(c["id"])
            if prev is not None and prev[1] != c:
                raise ReportError(f"conflicting check {c['id']!r} in {prev[0]} and {path}")
            seen.setdefault(c["id"], (str(path), c))
    checks = [c for _, c in seen.values()]
    out = _envelope("report", {"sources": commands}, checks)
    return out


# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubecum", description="Exact checks of lattice brackets and scale cumulants.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=2, help="lattice dimension")
        p.add_argument("--degree", type=int, default=3, help="degree bound of sample polynomials")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help=f"report path (default: ${OUTPUT_ENV} or the working directory)")

    v = sub.add_parser("verify", help="run every verification suite")
    common(v)
    v.add_argument("--N", type=int, default=1, help="points per unit on periodic lattices")
    v.add_argument("--mode", choices=("periodic", "window"), default="periodic", help="lattice for the operator identities")
    v.add_argument("--radius", type=int, default=4, help="window radius")
    v.add_argument("--kmax", type=int, default=4)
    v.add_argument("--samples", type=int, default=10)
    v.add_argument("--corrupt-products", action="store_true", help="negative control: add an algebra with a corrupted structure constant")

    c = sub.add_parser("converge", help="numeric convergence study across levels")
    common(c)
    c.add_argument("--levels", type=int, nargs="+", help="scale levels, h = 2^-level (at least three)")

    r = sub.add_parser("report", help="merge report files")
    r.add_argument("inputs", nargs="+")
    r.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "report":
        try:
            report = merge_reports(args.inputs)
        except ReportError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(_table(report["checks"]))
        if args.out:
            _write(report, Path(args.out))
        return 0 if not report["summary"]["failed"] else 1
    if args.command == "verify":
        report = run_verify(args)
    else:
        report = run_converge(args)
    path = _output_path(args, f"{args.command}.json")
    _write(report, path)
    print(_table(report["checks"]))
    s = report["summary"]
    print(f"{s['passed']}/{s['total']} checks passed; report written to {path}")
    return 0 if not s["failed"] else 1


if __name__ == "__main__":
    sys.exit(main())
