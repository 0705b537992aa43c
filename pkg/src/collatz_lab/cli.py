"""Command-line front end: ``collatz-lab VERB [options]``.

Exit codes: 0 success, 1 domain error (overflow, non-convergence, ...),
2 usage error, 3 when ``verify-paper`` finds a mismatching claim.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .core import CollatzError, MapKind, height, trajectory
from .pairs import analyze_pair
from .parity import MalformedVectorError, ParityVector, parity_vector
from .scanner import (counterexample_ratio, default_workers, emit_heights,
                      first_counterexample, scan_range, verify_family,
                      write_rows_csv, write_rows_jsonl)
from .stems import decide_all_x, garner_stem, is_block_prefix, is_corresponding_stem_pair
from .verify import EXTENDED_LIMIT, verify_paper

EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3


def _positive(text: str) -> int:
    try:
        value = int(text.replace("_", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _map_kind(text: str) -> MapKind:
    try:
        return MapKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collatz-lab",
        description="Collatz pair heights, parity vectors and Garner-stem counterexamples.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("height", help="height H(n) under the C map")
    p.add_argument("n", type=_positive)

    p = sub.add_parser("traj", help="trajectory of n down to 1")
    p.add_argument("n", type=_positive)
    p.add_argument("--map", type=_map_kind, default=MapKind.C)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("parity", help="parity vector of the trajectory of n")
    p.add_argument("n", type=_positive)
    p.add_argument("--map", type=_map_kind, default=MapKind.C)

    p = sub.add_parser("pair", help="full analysis of the pair (n, n+1)")
    p.add_argument("n", type=_positive)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("stems", help="Garner stem pair s_i, s_i'")
    p.add_argument("--i", type=_non_negative, required=True)

    p = sub.add_parser("check-stems", help="run the stem and block deciders on two T-vectors")
    p.add_argument("v1")
    p.add_argument("v2")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("scan", help="census of same-height pairs over [from, to)")
    _range_args(p)
    p.add_argument("--csv", action="store_true", help="write per-pair rows as CSV to --out")
    p.add_argument("--out", type=Path)
    p.add_argument("--checkpoint", type=Path)
    p.add_argument("--extended", action="store_true",
                   help=f"scan up to {EXTENDED_LIMIT:,} with a bounded cache")

    p = sub.add_parser("first-counterexample", help="smallest counterexample below --limit")
    p.add_argument("--limit", type=_positive, default=10**4)

    p = sub.add_parser("family", help="check the family 2^e m + base")
    p.add_argument("--base", type=_positive, default=3067)
    p.add_argument("--modulus-exp", type=_positive, default=19)
    p.add_argument("--count", type=_positive, default=100)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("ratio", help="counterexamples / same-height pairs below --limit")
    p.add_argument("--limit", type=_positive, default=10**6)
    p.add_argument("--jobs", type=_positive, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("emit-heights", help="n,height CSV for 1 <= n < limit")
    p.add_argument("--limit", type=_positive, required=True)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("verify-paper", help="check every published claim")
    p.add_argument("--extended", action="store_true")
    p.add_argument("--json", action="store_true")
    return parser


def _range_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--from", dest="start", type=_positive, default=2)
    p.add_argument("--to", dest="stop", type=_positive, default=10**6)
    p.add_argument("--jobs", type=_positive, default=None)
    p.add_argument("--json", action="store_true")


def _print_pair(pa) -> None:
    d = pa.to_dict()
    width = max(map(len, d))
    for key, value in d.items():
        if key.startswith("pre_vec") and value is not None:
            value = f"C:{value}"
        print(f"{key:<{width}}  {value}")


def _cmd_scan(args) -> int:
    if args.out is None and args.csv:
        print("error: --csv needs --out", file=sys.stderr)
        return EXIT_USAGE
    stop = EXTENDED_LIMIT if args.extended else args.stop
    if args.start >= stop:
        print(f"error: need --from < --to, got [{args.start}, {stop})", file=sys.stderr)
        return EXIT_USAGE
    sink = None
    fh = None
    if args.out is not None:
        fh = args.out.open("w")
        if args.csv:
            header = [True]

            def sink(rows):
                write_rows_csv(rows, fh, header=header.pop() if header else False)
        else:
            def sink(rows):
                write_rows_jsonl(rows, fh)
    try:
        report = scan_range(args.start, stop, args.jobs, row_sink=sink,
                            checkpoint=args.checkpoint,
                            cache_limit=(1 << 28) if args.extended else None)
    finally:
        if fh is not None:
            fh.close()
    if args.json:
        print(report.to_json())
    else:
        print(f"range               [{report.range_from}, {report.range_to})  ({report.boundary})")
        print(f"same-height pairs   {report.same_height_pairs}")
        print(f"compliant pairs     {report.compliant_pairs}")
        print(f"counterexamples     {report.counterexamples}")
        print(f"  primitive         {report.primitive_counterexamples}")
        print(f"degenerate pairs    {report.degenerate_pairs}")
        print(f"ratio               {float(report.ratio):.6f}")
        print(f"elapsed             {report.elapsed:.2f}s")
    return 0


def _cmd_check_stems(args) -> int:
    try:
        v1 = ParityVector.parse(args.v1, MapKind.T)
        v2 = ParityVector.parse(args.v2, MapKind.T)
    except MalformedVectorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if len(v1) != len(v2) or not len(v1):
        print("error: vectors must be non-empty and of equal length", file=sys.stderr)
        return EXIT_USAGE
    verdict = is_corresponding_stem_pair(v1, v2)
    block = is_block_prefix(v1, v2)
    sols = {t: str(decide_all_x(v1, v2, t)) for t in (-1, 0, 1)}
    if args.json:
        print(json.dumps({
            "corresponding_stems": verdict.holds,
            "equality_holds": verdict.equality_holds,
            "violated_prefix_length": verdict.violated_prefix_length,
            "witness_x": verdict.witness_x,
            "block_prefix": block,
            "solutions": {str(t): s for t, s in sols.items()},
        }))
        return 0
    print(f"corresponding stems  {verdict.holds}")
    print(f"  T_s(x) = T_s'(x+1) for all x   {verdict.equality_holds}")
    if verdict.violated_prefix_length is not None:
        print(f"  prefix of length {verdict.violated_prefix_length} fails at x = {verdict.witness_x}")
    print(f"block prefix         {block}")
    for t, s in sols.items():
        print(f"  x with T_v(x) - T_v'(x+1) = {t:+d}: {s}")
    return 0


def _dispatch(args) -> int:
    verb = args.verb
    if verb == "height":
        print(height(args.n))
    elif verb == "traj":
        values = list(trajectory(args.n, args.map))
        print(json.dumps(values) if args.json else " -> ".join(map(str, values)))
    elif verb == "parity":
        print(parity_vector(args.n, args.map))
    elif verb == "pair":
        pa = analyze_pair(args.n)
        if args.json:
            print(json.dumps(pa.to_dict()))
        else:
            _print_pair(pa)
    elif verb == "stems":
        pair = garner_stem(args.i)
        print(f"s_{args.i}  {pair.s}")
        print(f"s_{args.i}' {pair.s_prime}")
    elif verb == "check-stems":
        return _cmd_check_stems(args)
    elif verb == "scan":
        return _cmd_scan(args)
    elif verb == "first-counterexample":
        if args.limit < 2:
            print("error: --limit must be at least 2", file=sys.stderr)
            return EXIT_USAGE
        n = first_counterexample(args.limit)
        print("none" if n is None else n)
    elif verb == "family":
        rep = verify_family(args.base, args.modulus_exp, args.count)
        if args.json:
            print(json.dumps(rep.to_dict()))
        else:
            for key, value in rep.to_dict().items():
                print(f"{key:<20} {value}")
    elif verb == "ratio":
        if args.limit < 2:
            print("error: --limit must be at least 2", file=sys.stderr)
            return EXIT_USAGE
        r = counterexample_ratio(args.limit, args.jobs)
        if args.json:
            print(json.dumps({"limit": args.limit, "numerator": r.numerator,
                              "denominator": r.denominator, "ratio": float(r)}))
        else:
            print(f"{r} = {float(r):.6f}" if r != Fraction(0) else "0")
    elif verb == "emit-heights":
        if args.out is None:
            emit_heights(args.limit, sys.stdout)
        else:
            with args.out.open("w") as fh:
                emit_heights(args.limit, fh)
    elif verb == "verify-paper":
        echo = None if args.json else print
        results = verify_paper(args.extended, echo=echo)
        if args.json:
            print(json.dumps([{"claim": r.name, "passed": r.passed,
                               "expected": repr(r.expected),
                               "observed": repr(r.observed)} for r in results]))
        return 0 if all(r.passed for r in results) else EXIT_MISMATCH
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", "unset") is None:
        args.jobs = default_workers()
    try:
        return _dispatch(args)
    except CollatzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
