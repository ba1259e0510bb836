"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 parse or validation error,
3 a finite bound was exceeded (or a coefficient was not a finite sum).
"""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from typing import Optional, Sequence, TextIO, Tuple

from . import __version__
from .algebra_model import Presentation, validate
from .axiom_checker import AXIOMS, GROUPS, SUITES, run_suite
from .constructions import (DEFAULT_MAX_ORDER, adjoin_vacuum, check_closure_powers, check_hom,
                            closure_families_report, d_closure)
from .definition_file import parse_map, parse_presentation, serialize_presentation
from .errors import (BoundExceeded, ErtexError, NonSummable, NotApplicable, NotClosed, ParseError,
                     PreconditionFailed, UnknownBasisId)
from .fixtures import FIXTURES
from .formal_calculus import DegreeWindow
from .identities import run_self_test
from .report import Report

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ertex", description="Verify and embed vertex algebras without vacuum.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the axiom checks for a presentation's kind")
    p.add_argument("file")
    p.add_argument("--window", type=int, default=8, help="exponent bound for delta-kernel comparisons")
    p.add_argument("--axioms", help="comma-separated subset of: " + ", ".join(AXIOMS + tuple(GROUPS)))
    p.add_argument("--method", choices=("exact", "delta"), default="exact",
                   help="Jacobi identity by exact reduction or by windowed delta-kernel comparison")

    p = sub.add_parser("adjoin-vacuum", help="adjoin a vacuum to a d-ertex presentation")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("d-closure", help="close an injective ertex presentation under a derivation")
    p.add_argument("file")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--trace")

    p = sub.add_parser("embed", help="ertex -> d-ertex -> vertex")
    p.add_argument("file")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--trace")

    p = sub.add_parser("hom-check", help="verify a linear map is a homomorphism")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("mapfile")
    p.add_argument("--kind", choices=("ertex", "d-ertex", "vertex"), required=True)

    p = sub.add_parser("fixture", help="emit an example presentation")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("k", type=int)
    p.add_argument("-o", "--output", required=True)

    sub.add_parser("self-test", help="formal calculus identity suite")
    return ap


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str, out: TextIO) -> None:
    if path == "-":
        out.write(text)
        return
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _load(path: str) -> Presentation:
    try:
        return parse_presentation(_read(path))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}", exc.line, exc.column) from None


def _verdict(report: Report) -> int:
    return EXIT_PASS if report.passed else EXIT_FAIL


def _structure_gate(p: Presentation, out: TextIO, title: str) -> Optional[int]:
    report = validate(p)
    if report.passed:
        return None
    out.write(report.render(title) + "\n")
    return EXIT_INPUT


def _cmd_check(args, out, err) -> int:
    p = _load(args.file)
    if args.window < 0:
        raise _Usage("--window must be nonnegative")
    gate = _structure_gate(p, out, f"{p.name} ({p.kind})")
    if gate is not None:
        return gate
    axioms = [a.strip() for a in args.axioms.split(",") if a.strip()] if args.axioms else None
    try:
        report = run_suite(p, axioms, DegreeWindow.uniform(args.window), args.method)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    out.write(report.render(f"{p.name} ({p.kind})") + "\n")
    return _verdict(report)


def _closure_report(p, q, trace) -> Report:
    names = list(SUITES["d-ertex"]) + ["injectivity"]
    return Report.combine([run_suite(q, names), closure_families_report(p, trace),
                           check_closure_powers(q, trace)])


def _cmd_adjoin(args, out, err) -> int:
    p = _load(args.file)
    gate = _structure_gate(p, out, f"{p.name} ({p.kind})")
    if gate is not None:
        return gate
    q, witness = adjoin_vacuum(p)
    _write(args.output, serialize_presentation(q), out)
    report = run_suite(q).merge(check_hom(witness.inclusion, p, q, "ertex"))
    out.write(report.render(f"{q.name}: adjoined vacuum {q.vacuum}, dimension {p.dim} -> {q.dim}") + "\n")
    return _verdict(report)


def _cmd_closure(args, out, err) -> int:
    p = _load(args.file)
    gate = _structure_gate(p, out, f"{p.name} ({p.kind})")
    if gate is not None:
        return gate
    q, witness, trace = d_closure(p, args.max_order)
    _write(args.output, serialize_presentation(q), out)
    if args.trace:
        _write(args.trace, trace.render(), out)
    report = _closure_report(p, q, trace).merge(check_hom(witness.inclusion, p, q, "ertex"))
    out.write(report.render(f"{q.name}: derivative closure, dimension {p.dim} -> {q.dim}") + "\n")
    return _verdict(report)


def _cmd_embed(args, out, err) -> int:
    p = _load(args.file)
    gate = _structure_gate(p, out, f"{p.name} ({p.kind})")
    if gate is not None:
        return gate
    e1, w1, trace = d_closure(p, args.max_order)
    if args.trace:
        _write(args.trace, trace.render(), out)
    closure = _closure_report(p, e1, trace)
    if not closure.passed:
        out.write(closure.render(f"{e1.name}: derivative closure is not a D-ertex algebra") + "\n")
        return EXIT_FAIL
    e2, w2 = adjoin_vacuum(e1)
    _write(args.output, serialize_presentation(e2), out)
    inclusion = w2.inclusion.compose(w1.inclusion)
    report = run_suite(e2).merge(check_hom(inclusion, p, e2, "ertex"))
    out.write(report.render(f"{e2.name}: embedded, dimension {p.dim} -> {e1.dim} -> {e2.dim}") + "\n")
    return _verdict(report)


def _cmd_hom(args, out, err) -> int:
    a = _load(args.source)
    b = _load(args.target)
    for p in (a, b):
        gate = _structure_gate(p, out, f"{p.name} ({p.kind})")
        if gate is not None:
            return gate
    try:
        f = parse_map(_read(args.mapfile), a.basis, b.basis)
    except ParseError as exc:
        raise ParseError(f"{args.mapfile}: {exc}", exc.line, exc.column) from None
    report = check_hom(f, a, b, args.kind)
    out.write(report.render(f"{a.name} -> {b.name} ({args.kind} homomorphism)") + "\n")
    return _verdict(report)


def _cmd_fixture(args, out, err) -> int:
    _, make = FIXTURES[args.name]
    try:
        p = make(args.k)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    _write(args.output, serialize_presentation(p), out)
    return EXIT_PASS


def _cmd_self_test(args, out, err) -> int:
    report = run_self_test()
    out.write(report.render("formal calculus identities") + "\n")
    return _verdict(report)


COMMANDS = {
    "check": _cmd_check,
    "adjoin-vacuum": _cmd_adjoin,
    "d-closure": _cmd_closure,
    "embed": _cmd_embed,
    "hom-check": _cmd_hom,
    "fixture": _cmd_fixture,
    "self-test": _cmd_self_test,
}


def dispatch(argv: Optional[Sequence[str]], out: TextIO, err: TextIO) -> int:
    """Run one command, writing the report to ``out`` and diagnostics to ``err``."""
    try:
        with redirect_stdout(out), redirect_stderr(err):
            args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out, err)
    except PreconditionFailed as exc:
        err.write(f"error: {exc}\n")
        if exc.report is not None:
            out.write(exc.report.render("precondition") + "\n")
        return EXIT_FAIL
    except (BoundExceeded, NonSummable) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BOUND
    except (ParseError, UnknownBasisId, NotApplicable, NotClosed, _Usage) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ErtexError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAIL


def run(argv: Sequence[str]) -> Tuple[int, str, str]:
    """(exit code, standard output text, standard error text)."""
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(dispatch(argv, sys.stdout, sys.stderr))


if __name__ == "__main__":
    main()
