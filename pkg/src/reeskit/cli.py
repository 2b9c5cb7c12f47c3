"""Command-line front end.

Exit code contract: 0 = every asserted identity passed, 1 = a mathematical
check failed (hypotheses or certificate), 2 = operational failure (I/O,
malformed document, parse error).  Machine reports (--json) are byte-identical
across runs for identical input and seed; wall-clock timings appear only in
the human-readable output.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .fixtures import FIXTURE_NAMES, TIERS, fixture_document, fixtures_in_tier, run_fixture
from .hypotheses import check_setting
from .iodoc import (
    DocumentError,
    certificate_json,
    dump_json,
    fraction_str,
    load_document_file,
    report_json,
)
from .ideal_ops import colon, ideal_equal, saturation_exponent
from .polyring import DEGREVLEX, LEX, MonomialOrder, PolyParseError, UnknownVariable, poly_to_text
from .rees import (
    SpecializationDegenerate,
    build_context,
    defining_ideal_closed_form,
    fiber_block_minors,
    oracle_defining_ideal,
    special_fiber,
    specialize_and_certify,
    verify_theorem,
)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_OPERATIONAL = 2


def _order_from_flag(name: str) -> MonomialOrder:
    return LEX if name == "lex" else DEGREVLEX


def _write_json(args, payload: dict):
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dump_json(payload))


def _load(args):
    doc = load_document_file(args.file)
    if args.seed is not None:
        doc.seed = args.seed
    if args.order is not None:
        doc.order = args.order
    return doc


def _print_report(report, order):
    for c in report.checks:
        mark = "ok" if c.passed else "FAIL"
        print(f"  [{mark}] {c.name}")
    if report.prime:
        print(f"  distinguished prime: ({', '.join(report.prime)})")
    if report.normalized:
        print("  normalized matrix:")
        for row in report.normalized.presentation.matrix.entries:
            print("    [" + ", ".join(poly_to_text(p, order) for p in row) + "]")


def cmd_check(args) -> int:
    doc = _load(args)
    t0 = time.perf_counter()
    report = check_setting(doc.presentation(), doc.coordinate_change)
    elapsed = time.perf_counter() - t0
    print(f"check: {doc.name or args.file}")
    _print_report(report, _order_from_flag(doc.order))
    print(f"hypotheses: {'pass' if report.passed else 'FAIL'}  ({elapsed:.2f}s)")
    _write_json(args, {"command": "check", "input": doc.name or args.file, "seed": doc.seed,
                       "report": report_json(report)})
    return EXIT_OK if report.passed else EXIT_MATH


def cmd_defining_ideal(args) -> int:
    doc = _load(args)
    order = _order_from_flag(doc.order)
    report = check_setting(doc.presentation(), doc.coordinate_change)
    payload = {"command": "defining-ideal", "input": doc.name or args.file, "seed": doc.seed,
               "report": report_json(report)}
    if not report.passed and not args.force_oracle:
        print(f"hypotheses FAIL at: {', '.join(report.failing())}")
        print("(use --force-oracle to inspect the saturation anyway)")
        _write_json(args, payload)
        return EXIT_MATH

    ctx = build_context(report, force=not report.passed)
    closed = defining_ideal_closed_form(ctx, allow_uncertified=True)
    n_ell = len(ctx.L.generators)
    ells = closed.generators[:n_ell]
    fiber_part = closed.generators[n_ell:]
    print(f"symmetric-algebra ideal ({n_ell} linear relations):")
    for g in ells:
        print(f"  {poly_to_text(g, order)}")
    print(f"truncated-dual minors ({len(fiber_part)} generators):")
    for g in fiber_part:
        print(f"  {poly_to_text(g, order)}")
    payload["closed_form"] = {
        "linear_relations": [poly_to_text(g, order) for g in ells],
        "nonlinear": [poly_to_text(g, order) for g in fiber_part],
    }

    code = EXIT_OK if report.passed else EXIT_MATH
    if args.force_oracle and not report.passed:
        oracle = oracle_defining_ideal(ctx)
        n_exp = saturation_exponent(ctx.L, ctx.prime_ideal())
        single = colon(ctx.L, ctx.prime_ideal())
        eq_closed = ideal_equal(oracle, closed)
        eq_single = ideal_equal(oracle, single)
        print(f"oracle (saturation) generators: {len(oracle.generators)}")
        for g in oracle.gb().generators:
            print(f"  {poly_to_text(g, order)}")
        print(f"stabilization exponent: {n_exp}")
        print(f"oracle == closed form: {eq_closed}")
        print(f"oracle == single colon: {eq_single}")
        payload["oracle"] = {
            "generators": [poly_to_text(g, order) for g in oracle.gb().generators],
            "stabilization_exponent": n_exp,
            "equals_closed_form": eq_closed,
            "equals_single_colon": eq_single,
        }
    elif args.verify:
        t0 = time.perf_counter()
        cert = verify_theorem(ctx)
        payload["certificate"] = certificate_json(cert)
        for r in cert.identities:
            mark = "ok" if r.passed else ("--" if r.passed is None else "FAIL")
            print(f"  [{mark}] {r.name} ({r.elapsed:.2f}s)")
        if ctx.e > 1:
            try:
                spec, _, dcert = specialize_and_certify(ctx, seed=doc.seed)
                payload["deformation"] = certificate_json(dcert)
                payload["deformation"]["seed"] = spec.seed
                for r in dcert.identities:
                    mark = "ok" if r.passed else "FAIL"
                    print(f"  [{mark}] {r.name} ({r.elapsed:.2f}s)")
                if not dcert.verdict:
                    code = EXIT_MATH
            except SpecializationDegenerate as exc:
                print(f"  [FAIL] specialization: {exc}")
                payload["deformation"] = {"error": str(exc)}
                code = EXIT_MATH
        print(f"certificate: {'pass' if cert.verdict else 'FAIL'} ({time.perf_counter()-t0:.2f}s)")
        if not cert.verdict:
            code = EXIT_MATH
    _write_json(args, payload)
    return code


def cmd_oracle(args) -> int:
    doc = _load(args)
    order = _order_from_flag(doc.order)
    report = check_setting(doc.presentation(), doc.coordinate_change)
    ctx = build_context(report, force=not report.passed)
    oracle = oracle_defining_ideal(ctx)
    n_exp = saturation_exponent(ctx.L, ctx.prime_ideal())
    print(f"saturation oracle ({'certified' if ctx.certified else 'diagnostic'} input):")
    for g in oracle.gb().generators:
        print(f"  {poly_to_text(g, order)}")
    print(f"stabilization exponent: {n_exp}")
    _write_json(args, {
        "command": "oracle", "input": doc.name or args.file, "seed": doc.seed,
        "certified": ctx.certified,
        "generators": [poly_to_text(g, order) for g in oracle.gb().generators],
        "stabilization_exponent": n_exp,
    })
    return EXIT_OK


def cmd_fiber(args) -> int:
    doc = _load(args)
    order = _order_from_flag(doc.order)
    report = check_setting(doc.presentation(), doc.coordinate_change)
    if not report.passed:
        print(f"hypotheses FAIL at: {', '.join(report.failing())}; fiber requires a certified input")
        _write_json(args, {"command": "fiber", "input": doc.name or args.file,
                           "seed": doc.seed, "report": report_json(report)})
        return EXIT_MATH
    ctx = build_context(report)
    rec = special_fiber(ctx, oracle_defining_ideal(ctx))
    print("special fiber ideal (T-subring):")
    for g in rec["fiber"].generators:
        print(f"  {poly_to_text(g, order)}")
    print(f"codimension in T-ring: {rec['fiber_height']}")
    print(f"analytic spread: {rec['spread']} (expected {ctx.d + ctx.e - 1})")
    print(f"matches truncated-dual minors: {rec['equals_fiber_block']}")
    _write_json(args, {
        "command": "fiber", "input": doc.name or args.file, "seed": doc.seed,
        "fiber": [poly_to_text(g, order) for g in rec["fiber"].generators],
        "codimension": rec["fiber_height"],
        "analytic_spread": rec["spread"],
        "matches_truncated_dual_minors": rec["equals_fiber_block"],
    })
    ok = rec["equals_fiber_block"] and rec["spread"] == ctx.d + ctx.e - 1
    return EXIT_OK if ok else EXIT_MATH


def cmd_jacobian_dual(args) -> int:
    doc = _load(args)
    order = _order_from_flag(doc.order)
    report = check_setting(doc.presentation(), doc.coordinate_change)
    ctx = build_context(report, force=not report.passed)
    print("Jacobian dual:")
    for row in ctx.B.entries:
        print("  [" + ", ".join(poly_to_text(p, order) for p in row) + "]")
    blocks = {}
    if ctx.Bprime is not None:
        print("truncated block (last row and column removed):")
        for row in ctx.Bprime.entries:
            print("  [" + ", ".join(poly_to_text(p, order) for p in row) + "]")
        blocks["truncated"] = [[poly_to_text(p, order) for p in row] for row in ctx.Bprime.entries]
    _write_json(args, {
        "command": "jacobian-dual", "input": doc.name or args.file, "seed": doc.seed,
        "certified": ctx.certified,
        "dual": [[poly_to_text(p, order) for p in row] for row in ctx.B.entries],
        **blocks,
    })
    return EXIT_OK if report.passed else EXIT_MATH


def cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in FIXTURE_NAMES:
            doc = fixture_document(name)
            print(f"  {name:15s} tier={doc.tier:6s} "
                  f"{len(doc.matrix_text)}x{len(doc.matrix_text[0])} over "
                  f"{len(doc.ring)} variables, rank {doc.rank}, {len(doc.expect)} assertions")
        return EXIT_OK
    tier = args.tier or os.environ.get("REESKIT_TIER", "fast")
    if tier not in TIERS:
        print(f"unknown tier {tier!r}; choose from {TIERS}", file=sys.stderr)
        return EXIT_OPERATIONAL
    failures = 0
    outcomes = []
    for doc in fixtures_in_tier(tier):
        t0 = time.perf_counter()
        outcome = run_fixture(doc)
        elapsed = time.perf_counter() - t0
        outcomes.append(outcome)
        status = "pass" if outcome.passed else "FAIL"
        print(f"{doc.name}: {status} ({elapsed:.1f}s)")
        for desc, ok, observed, expected in outcome.results:
            mark = "ok" if ok else "FAIL"
            extra = "" if ok else f"  observed={observed!r} expected={expected!r}"
            print(f"  [{mark}] {desc}{extra}")
        if not outcome.passed:
            failures += 1
    _write_json(args, {
        "command": "fixtures", "tier": tier,
        "outcomes": [
            {"name": o.name, "passed": o.passed,
             "assertions": [{"assertion": d, "passed": ok} for d, ok, _, _ in o.results]}
            for o in outcomes
        ],
    })
    return EXIT_OK if failures == 0 else EXIT_MATH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="specialization seed override")
    common.add_argument("--order", choices=("degrevlex", "lex"), default=None,
                        help="term order used for printing")
    common.add_argument("--json", metavar="OUT", default=None,
                        help="write a deterministic machine report to this file")

    parser = argparse.ArgumentParser(
        prog="reeskit",
        description="Verify hypotheses and compute defining ideals of Rees algebras "
                    "of linearly presented height-two ideals and modules, exactly over Q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run the hypothesis pipeline")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("defining-ideal", parents=[common],
                       help="print the closed-form defining ideal")
    p.add_argument("file")
    p.add_argument("--verify", action="store_true", help="run the full identity certificate")
    p.add_argument("--force-oracle", action="store_true",
                   help="on failed hypotheses, compute the saturation oracle anyway")
    p.set_defaults(fn=cmd_defining_ideal)

    p = sub.add_parser("oracle", parents=[common], help="compute the saturation oracle")
    p.add_argument("file")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("fiber", parents=[common],
                       help="special fiber ideal and analytic spread")
    p.add_argument("file")
    p.set_defaults(fn=cmd_fiber)

    p = sub.add_parser("jacobian-dual", parents=[common],
                       help="print the Jacobian dual and its blocks")
    p.add_argument("file")
    p.set_defaults(fn=cmd_jacobian_dual)

    p = sub.add_parser("fixtures", parents=[common], help="list or run the embedded corpus")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("--tier", choices=TIERS, default=None,
                   help="cumulative tier selection (REESKIT_TIER overrides the default)")
    p.set_defaults(fn=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DocumentError, PolyParseError, UnknownVariable, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL


if __name__ == "__main__":
    sys.exit(main())
