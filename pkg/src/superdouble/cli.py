"""Command-line front end: ``superdouble bracket|cbracket|check|selftest``.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse failure.
"""
from __future__ import annotations

import argparse
import os
import re
import sys

from . import algebroid as alg
from . import checks, dft
from .algebra import Chart
from .expr_io import (ParseError, StructureError, generator_from_name, max_index, parse_bialgebroid,
                      parse_document, parse_expression, parse_flux, parse_section)
from .symplectic import poisson

KINDS = ("bialgebroid", "courant", "proto", "strong", "project", "genlie", "metric", "cbracket")


class InputError(Exception):
    pass


def _read(arg: str) -> str:
    """File contents if ``arg`` names a file, otherwise ``arg`` itself."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _expression_text(arg: str) -> str:
    """An expression literal or file; in files ``#`` starts a comment and lines are joined."""
    if not os.path.isfile(arg):
        return arg
    return " ".join(line.split("#", 1)[0].strip() for line in _read(arg).splitlines()).strip()


def _infer_mode(texts, doubled: bool) -> str:
    fams = set()
    for t in texts:
        for m in re.finditer(r"[A-Za-z_][A-Za-z0-9_]*", t):
            g = generator_from_name(m.group())
            if g is not None:
                fams.add(g.family)
    if doubled or fams & {"xt", "p", "pt"}:
        if fams & {"xs", "th", "ths"}:
            raise InputError("cannot mix doubled generators with xs_/th/ths_ generators")
        return "doubled"
    if fams & {"th", "ths"}:
        if fams & {"xi", "xis"}:
            raise InputError("cannot mix th/ths_ with xi/xis_ generators")
        return "dual"
    return "base"


def cmd_bracket(args) -> int:
    a, b = _expression_text(args.A), _expression_text(args.B)
    mode = _infer_mode([a, b], args.doubled)
    dim = max(max_index(a), max_index(b), args.dim or 1)
    chart = Chart(dim, mode)
    print(poisson(parse_expression(a, chart), parse_expression(b, chart)))
    return 0


def _section(path: str) -> dft.DoubleSection:
    return parse_section(_read(path))


def cmd_cbracket(args) -> int:
    s1, s2 = _section(args.A), _section(args.B)
    if s1.d != s2.d:
        raise InputError(f"sections have different dim ({s1.d} vs {s2.d})")
    derived = dft.c_bracket(s1, s2)
    rows = dft.c_bracket_components(s1, s2)
    components = dft.lift_double(rows)
    diff = derived - components
    print(f"derived = {derived}")
    print(f"components = {components}")
    for i in range(rows.d):
        print(f"vector[{i + 1}] = {rows.X[i]}")
    for i in range(rows.d):
        print(f"form[{i + 1}] = {rows.eta[i]}")
    print(f"difference = {diff}")
    return 0 if diff.is_zero else 1


def _kw(args, **names):
    """Keyword arguments for a suite, dropping flags the user left unset."""
    out = {}
    for key, attr in names.items():
        v = getattr(args, attr)
        if v is not None:
            out[key] = v
    return out


def _run_check(args):
    kind, files = args.kind, args.files
    common = _kw(args, dim="dim", degree="degree", samples="samples", seed="seed")
    if kind == "bialgebroid":
        if not files:
            return checks.bialgebroid_controls()
        return [alg.check_bialgebroid(parse_bialgebroid(_read(f)), f"bialgebroid {os.path.basename(f)}")
                for f in files]
    if kind == "courant":
        kw = _kw(args, degree="degree", samples="samples", seed="seed")
        if not files:
            return checks.courant(**kw)
        return [r for f in files
                for r in checks.courant(parse_bialgebroid(_read(f)), controls=False,
                                        prefix=f"courant {os.path.basename(f)}", **kw)]
    if kind == "proto":
        if not files:
            return checks.proto_controls()
        docs = [parse_document(_read(f)) for f in files]
        dims = {d.dim for d in docs}
        if len(dims) != 1:
            raise InputError(f"files disagree on dim: {sorted(dims)}")
        merged = docs[0]
        for d in docs[1:]:
            for k, v in d.arrays.items():
                merged.arrays.setdefault(k, {}).update(v)
        return [alg.check_proto(parse_bialgebroid(merged), parse_flux(merged))]
    if kind in ("strong", "project", "genlie", "cbracket"):
        if files:
            raise InputError(f"check {kind} takes no data files")
        if kind == "cbracket":
            return checks.c_bracket_routes(**common) + checks.cbracket_rows(**common)
        return getattr(checks, kind)(**common)
    if kind == "metric":
        if files:
            raise InputError("check metric takes no data files")
        return checks.metric(**_kw(args, dim="dim", samples="samples", seed="seed"))
    raise InputError(f"unknown check kind {kind!r}")


def _emit(reports, timing: bool, stop_on_fail: bool = False) -> int:
    status = 0
    for r in reports:
        print(r.line(timing), flush=True)
        if not r.passed:
            status = 1
            if stop_on_fail:
                break
    return status


def cmd_check(args) -> int:
    return _emit(_run_check(args), args.timing)


def cmd_selftest(args) -> int:
    return _emit(checks.selftest(quick=args.quick), args.timing, stop_on_fail=True)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superdouble", description="Exact graded-Poisson checks for "
                                "Courant algebroids and the double field theory C-bracket.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bracket", help="print the canonical Poisson bracket {A, B}")
    b.add_argument("A", help="expression or file")
    b.add_argument("B", help="expression or file")
    b.add_argument("--doubled", action="store_true", help="use the doubled chart (x, xt, p, pt)")
    b.add_argument("--dim", type=int, help="dimension (default: largest index used)")
    b.set_defaults(func=cmd_bracket)

    c = sub.add_parser("cbracket", help="C-bracket of two section files, derived vs components")
    c.add_argument("A")
    c.add_argument("B")
    c.set_defaults(func=cmd_cbracket)

    k = sub.add_parser("check", help="run a verification suite")
    k.add_argument("kind", choices=KINDS)
    k.add_argument("files", nargs="*", help="structure files (bialgebroid, courant, proto)")
    k.add_argument("--dim", type=int)
    k.add_argument("--degree", type=int)
    k.add_argument("--samples", type=int)
    k.add_argument("--seed", type=int)
    k.add_argument("--timing", action="store_true", help="append elapsed time to each line")
    k.set_defaults(func=cmd_check)

    s = sub.add_parser("selftest", help="run every suite with fixed seeds")
    s.add_argument("--quick", action="store_true", help="smaller sample counts")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for flag in ("dim", "degree", "samples"):
        v = getattr(args, flag, None)
        if v is not None and v < 1:
            print(f"error: --{flag} must be positive", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (ParseError, StructureError, InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
