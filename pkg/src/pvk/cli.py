"""Command line front end: certificate checking, theory verification,
dependency reports, formatting and hashing.

Exit codes for ``check``: 0 verified, 1 failed, 2 unparseable input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import CertificateSyntaxError, HashMismatch, PvkError
from . import checker as _checker
from . import sexpr as _sexpr
from .style import format_expr, with_style
from .theory import Registry, load_stdlib


def _load_registry(args):
    reg = Registry()
    if not getattr(args, "no_stdlib", False):
        load_stdlib(reg)
    for root in getattr(args, "theories", None) or []:
        reg.load(root)
    return reg


def _report_out(report, as_json):
    if as_json:
        print(json.dumps(report.as_dict(), indent=1, ensure_ascii=False))
        return
    for index, code, message in report.verdicts:
        line = f"step {index}: {code}"
        if message:
            line += f" ({message})"
        print(line)
    print("axioms:", ", ".join(sorted(report.axioms)) or "(none)")
    if report.conjectures:
        print("conjectures:", ", ".join(sorted(report.conjectures)))
    print("overall:", "pass" if report.ok else "fail")


def cmd_check(args):
    reg = _load_registry(args)
    try:
        with open(args.certificate, "rb") as f:
            cert = _checker.parse_certificate(f.read())
    except (OSError, CertificateSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HashMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = _checker.verify_certificate_data(cert, reg.lookup,
                                              reg.axiom_closure)
    _report_out(report, args.json)
    return 0 if report.ok else 1


def cmd_verify_theory(args):
    reg = Registry()
    if not args.no_stdlib:
        load_stdlib(reg)
    try:
        reg.load(args.directory)
    except PvkError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    failures = 0
    rows = []
    for name, item in sorted(reg.items.items()):
        if item.kind != "theorem" or item.certificate is None:
            continue
        report = _checker.verify_certificate_data(item.certificate,
                                                  reg.lookup,
                                                  reg.axiom_closure)
        rows.append({"theorem": name,
                     "verdict": "pass" if report.ok else "fail",
                     "status": reg.status(name)})
        if not report.ok:
            failures += 1
            rows[-1]["error"] = report.first_error()
    if args.json:
        print(json.dumps(rows, indent=1, ensure_ascii=False))
    else:
        for row in rows:
            line = f"{row['theorem']}: {row['verdict']} [{row['status']}]"
            if "error" in row:
                line += f" {row['error']}"
            print(line)
    return 1 if failures else 0


def cmd_deps(args):
    reg = _load_registry(args)
    try:
        report = reg.dependency_report(args.item)
    except PvkError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report, indent=1, ensure_ascii=False))
        return 0
    print(f"Axioms required (directly or indirectly) by {args.item}:")
    for name in report["axioms"]:
        print(f"  {name}")
    print("Unproven conjectures required (directly or indirectly):")
    for name in report["unproven_conjectures"]:
        print(f"  {name}")
    print("Dependents:")
    for name in report["dependents"]:
        print(f"  {name}")
    return 0


def _read_expr(path):
    with open(path, encoding="utf-8") as f:
        return _sexpr.parse(f.read())


def cmd_fmt(args):
    try:
        expr = _read_expr(args.expression)
    except (OSError, CertificateSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    styled = expr
    for spec in args.style or []:
        key, _, value = spec.partition("=")
        styled = with_style(styled, "", key, value)
    print(format_expr(styled, "latex" if args.latex else "text"))
    return 0


def cmd_hash(args):
    try:
        expr = _read_expr(args.expression)
    except (OSError, CertificateSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(expr.expr_id())
    return 0


def cmd_serve(args):
    import os
    import uvicorn
    from .service import create_app
    reg = _load_registry(args)
    app = create_app(reg, event_log=args.event_log, studio_dir=args.studio)
    port = args.port or int(os.environ.get("PVK_PORT", "8056"))
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="pvk",
        description="theorem-proving kernel and proof-certificate checker")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--theories", action="append", metavar="DIR",
                       help="extra theory directory (may repeat)")
        p.add_argument("--no-stdlib", action="store_true",
                       help="start from an empty registry")
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")

    p = sub.add_parser("check", help="verify a proof certificate")
    p.add_argument("certificate")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("verify-theory",
                       help="verify every theorem certificate in a directory")
    p.add_argument("directory")
    p.add_argument("--no-stdlib", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify_theory)

    p = sub.add_parser("deps", help="axiom/conjecture leaves of a theorem")
    p.add_argument("item")
    common(p)
    p.set_defaults(fn=cmd_deps)

    p = sub.add_parser("fmt", help="render an expression file")
    p.add_argument("expression")
    p.add_argument("--latex", action="store_true")
    p.add_argument("--style", action="append", metavar="KEY=VALUE")
    p.set_defaults(fn=cmd_fmt)

    p = sub.add_parser("hash", help="canonical digest of an expression file")
    p.add_argument("expression")
    p.set_defaults(fn=cmd_hash)

    p = sub.add_parser("serve", help="run the interactive proving service")
    p.add_argument("--port", type=int, default=None,
                   help="port (default: $PVK_PORT or 8056)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--event-log", default=None,
                   help="append-only JSONL session log")
    p.add_argument("--studio", default=None,
                   help="directory of built studio assets to serve at /studio")
    common(p)
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
