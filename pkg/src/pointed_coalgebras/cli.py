from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .address import fold_dyadic, gasket_coords, word_distance, words_equivalent
from .catalog import default_algebras, default_coalgebras, get_algebra, get_coalgebra
from .completion import completion_distance, limit_word, stream_literal
from .config import load_config
from .core import Dyadic
from .experiments import (
    lipschitz_table,
    triangle_g_claims,
    verify_claims_ab,
    write_claims_csv,
    write_lipschitz_csv,
)
from .morphisms import algebra_fold, coalgebra_iterate, mediating_final
from .parsing import parse_carrier_point, parse_stream, parse_word, parse_word_pair
from .verify import VerifyCaps, lipschitz_lines, run_suite, suite_names

logger = logging.getLogger(__name__)


def _setup_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def _is_stream(text: str) -> bool:
    return "(" in text


def _describe_word(w) -> str:
    if w.alphabet.arity == 2:
        return f"fold: {fold_dyadic(w)}"
    return f"coords: {gasket_coords(w)}"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcoalg", description="Exact distances and mediating maps for pointed metric coalgebras")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Log progress to stderr (-vv for debug)")
    parser.add_argument("--config", default=None, help="Path to a TOML config file")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_dist = sub.add_parser("dist", help="Distance between two words, or an interval for two streams.")
    p_dist.add_argument("first", help='Word like "llr.T" or stream like "ll(r)*"')
    p_dist.add_argument("second")
    p_dist.add_argument("--depth", type=int, default=None, help="Truncation depth for streams")

    p_fold = sub.add_parser("fold", help="Fold a word into [0, 1], the gasket, or an algebra.")
    p_fold.add_argument("word")
    p_fold.add_argument("--algebra", default=None, help=f"One of: {', '.join(default_algebras())}")

    p_equiv = sub.add_parser("equiv", help="Whether two words name the same point.")
    p_equiv.add_argument("first")
    p_equiv.add_argument("second")

    p_approx = sub.add_parser("approx", help="Depth-p word of a carrier point under a coalgebra.")
    p_approx.add_argument("name", help=f"One of: {', '.join(default_coalgebras())}")
    p_approx.add_argument("point", help='Dyadic like "3/8" or "3/2^3"; triangle points "x,0" or "apex"')
    p_approx.add_argument("depth", type=int, nargs="?", default=None)

    p_eval = sub.add_parser("eval", help="Exact mediating map: a coalgebra at a point, or an algebra on a word.")
    p_eval.add_argument("name")
    p_eval.add_argument("arg")

    p_verify = sub.add_parser("verify", help="Run a verification suite.")
    p_verify.add_argument("suite", help=f"One of: {', '.join(suite_names())}")
    p_verify.add_argument("cap", type=int, nargs="?", default=None, help="Depth or n bound for the suite")
    p_verify.add_argument("--depth", type=int, default=None, help="Bi-pointed depth cap (also bounds isometry-ck)")
    p_verify.add_argument("--nmax", type=int, default=None)
    p_verify.add_argument("--samples", type=int, default=None, help="Interior samples per interval, endpoints not counted")
    p_verify.add_argument("--seed", type=int, default=None, help="Seed for randomized trials")
    p_verify.add_argument("--json", dest="as_json", action="store_true", help="Emit JSON")

    p_table = sub.add_parser("table", help="Print an experiment table.")
    p_table.add_argument("which", choices=["claims", "g-claims", "lipschitz"])
    p_table.add_argument("--nmax", type=int, default=None)
    p_table.add_argument("--samples", type=int, default=None)
    p_table.add_argument("--csv", default=None, help="Also write the table to this CSV path")
    return parser


def main(argv=None):
    argv = argv if argv is not None else sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    cfg = load_config(Path(args.config) if args.config else None)

    try:
        return _dispatch(args, cfg)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _dispatch(args, cfg) -> int:
    if args.cmd == "dist":
        if _is_stream(args.first) or _is_stream(args.second):
            s, t = parse_stream(args.first), parse_stream(args.second)
            depth = args.depth if args.depth is not None else cfg["approx"]["depth"]
            interval = completion_distance(s, t, depth)
            print(f"{interval} (depth {depth})")
            return 0
        w, v = parse_word_pair(args.first, args.second)
        print(word_distance(w, v))
        return 0

    if args.cmd == "fold":
        w = parse_word(args.word)
        if args.algebra:
            print(algebra_fold(get_algebra(args.algebra), w))
        elif w.alphabet.arity == 2:
            print(fold_dyadic(w))
        else:
            print(gasket_coords(w))
        return 0

    if args.cmd == "equiv":
        w, v = parse_word_pair(args.first, args.second)
        print("yes" if words_equivalent(w, v) else "no")
        return 0

    if args.cmd == "approx":
        coalgebra = get_coalgebra(args.name)
        x = parse_carrier_point(coalgebra, args.point)
        depth = args.depth if args.depth is not None else cfg["approx"]["depth"]
        w = coalgebra_iterate(coalgebra, x, depth)
        print(f"word: {w}")
        print(_describe_word(w))
        print(f"radius: {Dyadic(1, depth)}")
        return 0

    if args.cmd == "eval":
        if args.name in default_algebras():
            print(algebra_fold(get_algebra(args.name), parse_word(args.arg)))
            return 0
        coalgebra = get_coalgebra(args.name)
        stream = mediating_final(coalgebra, parse_carrier_point(coalgebra, args.arg))
        w = limit_word(stream)
        print(f"stream: {stream_literal(stream)}")
        print(f"word: {w}")
        print(_describe_word(w))
        return 0

    if args.cmd == "verify":
        return _cmd_verify(args, cfg)

    if args.cmd == "table":
        return _cmd_table(args, cfg)

    return 2


def _cmd_verify(args, cfg) -> int:
    caps = VerifyCaps.from_config(cfg)
    overrides = {"bi_depth": args.depth, "isometry_depth": args.depth, "nmax": args.nmax, "samples": args.samples, "seed": args.seed}
    caps = replace(caps, **{k: v for k, v in overrides.items() if v is not None})
    results = run_suite(args.suite, caps, args.cap)
    ok = all(r.ok for r in results)

    if args.as_json:
        payload = {
            "suite": args.suite,
            "ok": ok,
            "results": [
                {
                    "suite": r.name,
                    "checks": [
                        {"name": c.name, "checked": c.checked, "failures": c.failures, "first_failure": c.first_failure}
                        for c in r.checks
                    ],
                }
                for r in results
            ],
        }
        print(json.dumps(payload, indent=2))
        return 0 if ok else 1

    if args.suite == "lipschitz":
        for line in lipschitz_lines(caps.with_cap("lipschitz", args.cap)):
            print(line)
    for r in results:
        for c in r.checks:
            status = "ok" if c.ok else "FAIL"
            print(f"{status:4} {c.name}: {c.checked} checked, {c.failures} failed")
            if c.first_failure:
                print(f"     first failure: {c.first_failure}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_table(args, cfg) -> int:
    nmax = args.nmax if args.nmax is not None else cfg["verify"]["nmax"]
    samples = args.samples if args.samples is not None else cfg["verify"]["samples"]
    csv_path = args.csv or cfg["output"]["csv"] or None

    if args.which == "lipschitz":
        rows = lipschitz_table(nmax)
        print("n\tx\ty\tf(x)\tf(y)\tratio")
        for r in rows:
            print(f"{r.n}\t{r.x}\t{r.y}\t{r.fx}\t{r.fy}\t{r.ratio}")
        if csv_path:
            write_lipschitz_csv(Path(csv_path), rows)
        return 0 if all(r.ok for r in rows) else 1

    report = verify_claims_ab(nmax, samples) if args.which == "claims" else triangle_g_claims(nmax, samples)
    print("family\tn\tx\tvalue\titerated\texpected")
    for s in report.samples:
        print(f"{s.family}\t{s.n}\t{s.x}\t{s.reference}\t{s.iterated}\t{s.expected}")
    if csv_path:
        write_claims_csv(Path(csv_path), report)
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
