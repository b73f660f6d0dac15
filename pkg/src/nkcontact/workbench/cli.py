"""Command-line entry point: ``nkcontact <command> [--fixture NAME | --input FILE] ...``.

Exit codes: 0 when no error-severity diagnostic is raised, 1 when at least one
is, 2 on input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from ..nullity_lab.classify import SUBCOMMAND_SECTIONS, Analysis, sparse
from ..report import jsonable
from ..tensor_core import InputError, parse_rational
from .fixtures import FIXTURES, builtin_fixture
from .manifold_file import NAME, parse_manifold_file
from .render import render_text

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _assignment(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not NAME.match(name):
        raise argparse.ArgumentTypeError(f"expected NAME=RATIONAL, got {text!r}")
    try:
        return name, parse_rational(value)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nkcontact", description="Exact curvature workbench for contact metric frames.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="FILE", help="manifold JSON file")
    src.add_argument("--fixture", metavar="NAME", help="built-in fixture, e.g. hyperbolic(3,1)")
    common.add_argument("--set", metavar="NAME=RATIONAL", action="append", type=_assignment, default=[],
                        help="bind a parameter (repeatable)")
    common.add_argument("--use-paper-connection", action="store_true",
                        help="use the frame's connection_override instead of the Koszul connection")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    sub.add_parser("check", parents=[common], help="contact axioms and connection invariants")
    curv = sub.add_parser("curvature", parents=[common], help="connection, curvature, Ricci, scalar")
    curv.add_argument("--component", nargs=3, type=int, metavar=("I", "J", "K"),
                      help="only R(e_I, e_J) e_K")
    sub.add_parser("identities", parents=[common], help="N(kappa) identity suite")
    sub.add_parser("theorems", parents=[common], help="curvature-condition verdicts and f_C fit")
    sub.add_parser("classify", parents=[common], help="full classification report")
    fx = sub.add_parser("fixtures", help="list built-in fixtures")
    fx.add_argument("--format", choices=("text", "structured"), default="text")
    return parser


def _load(args):
    params = dict(args.set)
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
        return parse_manifold_file(text, params), args.input
    return builtin_fixture(args.fixture, params), args.fixture


def _list_fixtures(fmt: str, out: TextIO) -> None:
    if fmt == "structured":
        data = [{"name": f.name, "params": list(f.params), "summary": f.summary} for f in FIXTURES]
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return
    for f in FIXTURES:
        sig = f"{f.name}({', '.join(f.params)})" if f.params else f.name
        out.write(f"{sig:28} {f.summary}\n")


def run_cli(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"nkcontact: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if args.command == "fixtures":
        _list_fixtures(args.format, out)
        return EXIT_OK

    try:
        frame, source = _load(args)
        analysis = Analysis(frame, args.use_paper_connection, source)
        report = analysis.report(SUBCOMMAND_SECTIONS[args.command])
        if args.command == "classify":
            report.sections["flags"] = jsonable(analysis.flags())
        if args.command == "curvature" and args.component:
            i, j, k = args.component
            m = frame.dim
            if not all(1 <= x <= m for x in (i, j, k)):
                raise InputError(f"component indices must lie in 1..{m}")
            vec = analysis.bundle.R.array[i - 1, j - 1, k - 1]
            report.sections["curvature"]["component"] = {"i": i, "j": j, "k": k, "components": sparse(vec)}
    except InputError as exc:
        err.write(f"nkcontact: input error: {exc}\n")
        return EXIT_USAGE

    if args.format == "structured":
        out.write(report.to_json())
    else:
        out.write(render_text(report.to_dict()))
    return report.exit_code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
