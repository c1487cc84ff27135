"""Command-line front end.

    rbcalc [--alphabet x,y] [--order-n 2] [--lambda sym|Q] [--format text|json]
           COMMAND ...

Commands: reduce, nf, mul, diff, basis, verify.  Exit codes: 0 success,
1 usage or parse error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import gs, verify
from .rb_engine import derive, diamond
from .terms import Alphabet
from .textio import ParseError, parse_poly, poly_json_obj, render_poly, render_word
from .verify import CHECKS


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract reserves 2 for
    # verification failures and 1 for usage/parse problems
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    # the shared flags live on a parent parser with SUPPRESS defaults so they
    # can be given before or after the subcommand without clobbering each other
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--alphabet", default=argparse.SUPPRESS,
                        help="comma-separated ordered symbols (default: x,y)")
    shared.add_argument("--order-n", type=int, default=argparse.SUPPRESS,
                        help="truncation order of the differential alphabet "
                             "(default: 2)")
    shared.add_argument("--lambda", dest="weight", default=argparse.SUPPRESS,
                        help="'sym' for the formal weight, or a rational like "
                             "0, -1, 3/2")
    shared.add_argument("--format", choices=("text", "json"),
                        default=argparse.SUPPRESS)

    p = _Parser(prog="rbcalc", description=__doc__, parents=[shared],
                formatter_class=argparse.RawDescriptionHelpFormatter)

    sub = p.add_subparsers(dest="command", required=True)

    for name, doc in (("reduce", "project an expression onto the RBWord basis"),
                      ("diff", "apply the derivation")):
        sp = sub.add_parser(name, help=doc, parents=[shared])
        sp.add_argument("expr")

    sp = sub.add_parser("nf", help="reduce to the canonical normal form",
                        parents=[shared])
    sp.add_argument("expr")
    sp.add_argument("--trace", action="store_true",
                    help="show each reduction step")

    sp = sub.add_parser("mul", help="diamond product of two expressions",
                        parents=[shared])
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("basis", help="list the canonical basis up to a size",
                        parents=[shared])
    sp.add_argument("--max-size", type=int, default=3)

    sp = sub.add_parser("verify", help="run a verification report",
                        parents=[shared])
    sp.add_argument("check", choices=sorted(CHECKS))
    sp.add_argument("--max-size", type=int, default=2)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--n-max", type=int, default=None,
                    help="top truncation order for the basis check")
    return p


def _weight(text: str) -> Optional[Fraction]:
    if text == "sym":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad --lambda value {text!r}: {exc}") from exc


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    # shared flags use SUPPRESS defaults so they survive the subparser pass;
    # resolve the fallbacks here
    alphabet_text = getattr(args, "alphabet", "x,y")
    order_n = getattr(args, "order_n", 2)
    weight_text = getattr(args, "weight", "sym")
    args.format = getattr(args, "format", "text")
    try:
        symbols = tuple(s.strip() for s in alphabet_text.split(",") if s.strip())
        alphabet = Alphabet(symbols, order_n)
        weight = _weight(weight_text)
    except ValueError as exc:
        print(f"rbcalc: error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command in ("reduce", "nf", "diff"):
            poly = parse_poly(alphabet, args.expr)
            trace = None
            if args.command == "nf":
                if args.trace:
                    poly, trace = gs.normal_form(alphabet, poly, trace=True)
                else:
                    poly = gs.normal_form(alphabet, poly)
            elif args.command == "diff":
                poly = derive(alphabet, poly)
            if args.format == "json":
                obj = poly_json_obj(alphabet, poly, weight)
                if trace is not None:
                    obj["trace"] = trace.to_json_obj(alphabet)
                print(json.dumps(obj, ensure_ascii=False, indent=2))
            else:
                if trace is not None and trace.steps:
                    for step in trace.steps:
                        print(step.text(alphabet))
                print(render_poly(alphabet, poly, weight))
            return 0

        if args.command == "mul":
            left = parse_poly(alphabet, args.left)
            right = parse_poly(alphabet, args.right)
            poly = diamond(left, right)
            if args.format == "json":
                print(json.dumps(poly_json_obj(alphabet, poly, weight),
                                 ensure_ascii=False, indent=2))
            else:
                print(render_poly(alphabet, poly, weight))
            return 0

        if args.command == "basis":
            words = gs.enumerate_irr(alphabet, args.max_size)
            if args.format == "json":
                print(json.dumps(
                    {"basis": [render_word(alphabet, w) for w in words]},
                    ensure_ascii=False, indent=2))
            else:
                print(", ".join(render_word(alphabet, w) for w in words))
            return 0

        if args.command == "verify":
            fn = CHECKS[args.check]
            kwargs = {"seed": args.seed}
            if args.check == "basis" and args.n_max is not None:
                kwargs["n_max"] = args.n_max
            report = fn(alphabet, args.max_size, **kwargs)
            print(report.to_json() if args.format == "json" else report.to_text())
            return 0 if report.passed else 2

    except ParseError as exc:
        print(f"rbcalc: parse error: {exc}", file=sys.stderr)
        return 1

    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
