"""Command line entry point ``qdg``.

Exit codes: 0 success, 1 usage or input error (a JSON error object goes to
stderr), 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import qv
from .complexes import ComplexError, SimplicialComplex, abstract_descending_link, abstract_link
from .diagram import FLAVORS, DiagramError, canonical_code, concatenate, dumps, invert, loads
from .presentation import PresentationError
from .rewriting import reduce
from .topology import TopologyError, homology
from .verify import VerificationPlan, default_table


class CliError(Exception):
    def __init__(self, code: str, message: str, location=None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.location = location


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _read(path: str | None) -> str:
    try:
        if path is None or path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError("io", str(exc), path) from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _diagram(path):
    return loads(_read(path))


def _element(path) -> qv.GroupElement:
    d = _diagram(path)
    try:
        return qv.GroupElement.of(d)
    except qv.QVError as exc:
        raise CliError(exc.code, str(exc), path) from None


def _input(args):
    return args.input if args.input is not None else args.in_path


def cmd_reduce(args):
    _write(dumps(reduce(_diagram(_input(args)))), args.out)


def cmd_mul(args):
    a, b = _diagram(args.a), _diagram(args.b)
    _write(dumps(reduce(concatenate(a, b))), args.out)


def cmd_inv(args):
    _write(dumps(reduce(invert(_diagram(_input(args))))), args.out)


def cmd_canon(args):
    d = _diagram(_input(args))
    if args.flavor == "full":
        _write(dumps(d), args.out)
    else:
        code = canonical_code(d, args.flavor)
        _write(_json_text({"code": json.loads(code.data), "flavor": args.flavor}), args.out)


def cmd_eval(args):
    g = _element(_input(args))
    try:
        v = qv.BinaryAddress.parse(args.address, args.tree)
        _write(str(qv.evaluate(g, v)) + "\n", args.out)
    except (qv.QVError, KeyError) as exc:
        raise CliError(getattr(exc, "code", "bad-address"), str(exc)) from None


def cmd_to_treepair(args):
    g = _element(_input(args))
    tp = qv.diagram_to_treepair(g)
    _write(_json_text(tp.to_json()), args.out)


def cmd_from_treepair(args):
    try:
        obj = json.loads(_read(_input(args)))
    except json.JSONDecodeError as exc:
        raise CliError("parse", str(exc)) from None
    tp = qv.TreePair.from_json(obj)
    _write(dumps(qv.treepair_to_diagram(tp).diagram), args.out)


def cmd_member(args):
    g = _element(_input(args))
    test = qv.member_QF if args.family == "qf" else qv.member_QT
    _write(("true" if test(g) else "false") + "\n", args.out)


def cmd_link(args):
    if args.full:
        K = abstract_link(args.k, args.l, args.max_dim)
    else:
        K = abstract_descending_link(args.k, args.l, args.family.upper(), args.max_dim)
    _write(json.dumps(K.to_json(), sort_keys=True) + "\n", args.out)


def cmd_homology(args):
    try:
        obj = json.loads(_read(_input(args)))
    except json.JSONDecodeError as exc:
        raise CliError("parse", str(exc)) from None
    K = SimplicialComplex.from_json(obj)
    rep = homology(K, args.max_degree, args.method)
    _write(_json_text(rep.to_json()), args.out)


def cmd_verify(args):
    if args.family is None and (args.k is not None or args.l is not None):
        raise CliError("usage", "--k/--l need --family")
    try:
        if args.family is None:
            ns = (args.n,) if args.n is not None else (0, 1)
            plans = default_table(ns)
        else:
            n = 0 if args.n is None else args.n
            plans = [VerificationPlan.make(args.family, n, args.k, args.l, args.mode,
                                           args.override, args.method)]
    except ValueError as exc:
        raise CliError("usage", str(exc)) from None
    rows = []
    for plan in plans:
        row = plan.run()
        rows.append(row)
        if not args.quiet:
            tag = " (exploratory)" if plan.exploratory else ""
            print(f"{plan.family} n={plan.n} k={plan.k} l={plan.l} {plan.mode}: "
                  f"{row['verdict']}{tag} [{row['seconds']}s]", file=sys.stderr)
    binding = rows if args.count_exploratory else [r for r in rows if not r["exploratory"]]
    ok = all(r["verdict"] == "pass" for r in binding)
    _write(_json_text({"all_pass": ok, "rows": rows}), args.out)
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qdg", description="Diagram groups, QF/QT/QV and descending links.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def with_io(p, positional=True):
        if positional:
            p.add_argument("input", nargs="?", help="input JSON file (default: stdin)")
        p.add_argument("--in", dest="in_path", help="input JSON file")
        p.add_argument("--out", help="output file (default: stdout)")
        return p

    p = with_io(sub.add_parser("reduce", help="remove all dipoles"))
    p.set_defaults(func=cmd_reduce)
    p = sub.add_parser("mul", help="stack A on B and reduce")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_mul)
    p = with_io(sub.add_parser("inv", help="inverse (reflect and reduce)"))
    p.set_defaults(func=cmd_inv)
    p = with_io(sub.add_parser("canon", help="canonical serialization"))
    p.add_argument("--flavor", choices=FLAVORS, default="full")
    p.set_defaults(func=cmd_canon)
    p = with_io(sub.add_parser("eval", help="evaluate a QV element on an address"))
    p.add_argument("--address", required=True, help="bits, or e for the root")
    p.add_argument("--tree", type=int, default=0)
    p.set_defaults(func=cmd_eval)
    p = with_io(sub.add_parser("to-treepair", help="diagram to tree pair"))
    p.set_defaults(func=cmd_to_treepair)
    p = with_io(sub.add_parser("from-treepair", help="tree pair to diagram"))
    p.set_defaults(func=cmd_from_treepair)
    p = with_io(sub.add_parser("member", help="QF / QT membership"))
    p.add_argument("--family", choices=("qf", "qt"), required=True)
    p.set_defaults(func=cmd_member)
    p = sub.add_parser("link", help="abstract (descending) link as complex JSON")
    p.add_argument("--family", choices=("qf", "qt", "qv"), default="qv")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--max-dim", type=int, default=None)
    p.add_argument("--full", action="store_true", help="full link (ascending vertices too)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_link)
    p = with_io(sub.add_parser("homology", help="homology of a complex JSON"))
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--method", choices=("auto", "snf", "modp"), default="auto")
    p.set_defaults(func=cmd_homology)
    p = sub.add_parser("verify", help="connectivity of descending links at the bounds")
    p.add_argument("--family", type=str.upper, choices=("QF", "QT", "QV"))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--mode", choices=("strict", "homology-only"))
    p.add_argument("--method", choices=("auto", "snf", "modp"), default="auto")
    p.add_argument("--override", action="store_true", help="allow (k, l) below the bounds")
    p.add_argument("--count-exploratory", action="store_true",
                   help="let exploratory rows decide the exit code too")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "command", None):
            raise CliError("usage", "a command is required")
        if hasattr(args, "input") and hasattr(args, "in_path"):
            if args.input is not None and args.in_path is not None:
                raise CliError("usage", "give the input either positionally or with --in")
        rc = args.func(args)
        return 0 if rc is None else rc
    except CliError as exc:
        err = {"code": exc.code, "message": exc.message, "location": exc.location}
    except (DiagramError, qv.QVError, ComplexError, TopologyError) as exc:
        loc = None
        if isinstance(exc, DiagramError) and exc.violations:
            loc = [v.as_dict() for v in exc.violations]
        err = {"code": getattr(exc, "code", "error"), "message": str(exc), "location": loc}
    except PresentationError as exc:
        err = {"code": "presentation", "message": str(exc), "location": None}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
