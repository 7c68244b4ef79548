"""Command-line front end: ``tamedgk analyze | check | examples``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

from .conventions import convention_text
from .report import (EXIT_OK, EXIT_PARSE, IDENTITIES, AnalysisError, analyze_text, load_package,
                     run_identity)
from . import poisson as P


def fixture_names() -> list[str]:
    root = resources.files("tamedgk") / "fixtures"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".alg"))


def fixture_text(name: str) -> str:
    return (resources.files("tamedgk") / "fixtures" / f"{name}.alg").read_text()


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _analyze_one(path: str, as_json: bool) -> tuple[str, str, int]:
    """Returns (stdout text, stderr text, exit code) for one file."""
    try:
        text = _read(path)
    except OSError as exc:
        return "", f"{path}: cannot read: {exc.strerror}\n", EXIT_PARSE
    try:
        result = analyze_text(text)
    except AnalysisError as exc:
        return "", f"{path}: {exc}\n", exc.exit_code
    out = result.report.to_json() if as_json else result.report.to_text()
    err = "".join(f"{path}: identity violated: {label}: {c.witness}\n" for label, c in result.failures)
    return out, err, result.exit_code


def cmd_analyze(args) -> int:
    if args.convention:
        print(convention_text())
        print()
    # each file is analyzed independently; output is buffered per file
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda p: _analyze_one(p, args.json), args.files))
    code = EXIT_OK
    for path, (out, err, rc) in zip(args.files, results):
        if len(args.files) > 1 and not args.json:
            print(f"== {path}")
        sys.stdout.write(out)
        sys.stderr.write(err)
        code = max(code, rc)
    return code


def cmd_check(args) -> int:
    if args.identity not in IDENTITIES:
        print(f"unknown identity {args.identity!r}; choose from {', '.join(IDENTITIES)}", file=sys.stderr)
        return EXIT_PARSE
    try:
        lie, pkg = load_package(_read(args.file))
    except OSError as exc:
        print(f"{args.file}: cannot read: {exc.strerror}", file=sys.stderr)
        return EXIT_PARSE
    except AnalysisError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.identity == "schouten-modes":
        for name, mode in P.schouten_all_modes(lie, P.commutator_skew(pkg, P.HALF)).items():
            print(f"[Q~, Q~] by {name}: {mode}")
    checks = run_identity(args.identity, lie, pkg)
    if not checks:
        print(f"{args.identity}: not applicable in dimension {lie.dim}")
        return EXIT_OK
    code = EXIT_OK
    for c in checks:
        print(f"{args.identity}: {c.label}: residual {c.residual}")
        if not c.passed:
            print(f"  witness: {c.witness}")
            code = 4
    return code


def cmd_examples(args) -> int:
    if args.emit:
        if args.emit not in fixture_names():
            print(f"unknown example {args.emit!r}", file=sys.stderr)
            return EXIT_PARSE
        sys.stdout.write(fixture_text(args.emit))
        return EXIT_OK
    for name in fixture_names():
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tamedgk",
                                     description="Exact analysis of tamed almost generalized Kaehler structures "
                                                 "on Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline on structure files")
    a.add_argument("files", nargs="+", metavar="file")
    a.add_argument("--json", action="store_true", help="emit the report as JSON")
    a.add_argument("--convention", action="store_true", help="print the sign-convention ledger first")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check", help="run a single identity")
    c.add_argument("file")
    c.add_argument("--identity", required=True, metavar="NAME", help=", ".join(IDENTITIES))
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("examples", help="list or print the shipped example files")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="NAME")
    e.set_defaults(func=cmd_examples)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit status 2 for usage errors; map them to the parse-error code
        return EXIT_PARSE if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
