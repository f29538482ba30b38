"""Command-line interface: solve, vanishing-order, inspect, verify.

Exit status: 0 success, 1 usage or parse error, 2 non-extendable tuple,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .arith import GaussianField, make_field
from .diffpoly import gen_separant, separant, separant_matrix
from .errors import AodeError
from .jets import jet_ideal
from .parser import parse_constant, parse_diffpoly, parse_poly
from .poly import groebner_basis
from .solver import (
    DEFAULT_BOUND,
    SolutionDescription,
    constraint_ring,
    global_vanishing_order,
    local_vanishing_order,
    quasilinear_bound,
    solve,
    verify_truncation,
)

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_ORDER = 8

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_~]*")


class UsageError(AodeError):
    code = "usage"


def _wrapped(text: str) -> bool:
    """Whether the whole of ``text`` sits inside one pair of parentheses."""
    if not (text.startswith("(") and text.endswith(")")):
        return False
    depth = 0
    for pos, ch in enumerate(text):
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and pos < len(text) - 1:
            return False
    return True


def split_top_level(text: str) -> list:
    """Split a tuple such as ``(0, 1/2, c_3)`` on commas outside parentheses."""
    text = text.strip()
    if _wrapped(text):
        text = text[1:-1]
    parts, depth, cur = [], 0, []
    for ch in text:
        depth += (ch == "(") - (ch == ")")
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    if parts == [""]:
        return []
    if any(p == "" for p in parts):
        raise UsageError(f"empty entry in tuple {text!r}")
    return parts


def parse_tuple(text: str, field) -> list:
    """Constants over ``field``; a bare identifier that is not a declared
    parameter (nor the Gaussian unit) names an unknown entry."""
    out = []
    for entry in split_top_level(text):
        if _IDENT.fullmatch(entry) and entry not in field.params and not (
                entry == "i" and isinstance(field, GaussianField)):
            out.append(entry)
        else:
            out.append(parse_constant(entry, field))
    return out


def _field_from_args(args):
    params = tuple(p.strip() for p in (args.params or "").split(",") if p.strip())
    if params and args.field != "param":
        raise UsageError("--params requires --field param")
    return make_field(args.field, params)


# ---------------------------------------------------------------------------
# records


def solution_record(F, equation, field, s: SolutionDescription) -> dict:
    rec = {
        "equation": equation,
        "field": field.tag,
        "params": list(field.params),
        "order": s.n,
        "ell": s.ell,
        "status": s.status,
        "provenance": {k: s.provenance[k] for k in ("m", "i", "r", "q", "M", "level")
                       if s.provenance.get(k) is not None},
        "dimension_bound": s.dimension_bound,
        "free_vars": sorted(s.free_vars, key=lambda v: int(v[2:])),
        "constraints": [] if s.is_empty() else [g.render() for g in s.constraints],
        "conditions": {k: v.render() for k, v in s.conditions.items()},
        "coefficients": [],
    }
    if s.message:
        rec["message"] = s.message
    for j, c in enumerate(s.coefficients or []):
        rec["coefficients"].append({
            "index": j,
            "c_value": c.render(),
            "series_value": s.series_coefficient(j).render(),
        })
    return rec


def record_to_solution(rec: dict):
    """Rebuild (F, SolutionDescription) from a record emitted by ``solve``."""
    try:
        field = make_field(rec["field"], tuple(rec.get("params", ())))
        F = parse_diffpoly(rec["equation"], field)
        status = rec["status"]
        coeffs = rec["coefficients"]
        names = list(rec.get("free_vars", []))
        constraints = rec.get("constraints", [])
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed solution record: {exc}") from None
    if status == "empty":
        raise UsageError("an empty solution record has nothing to verify")
    ring = constraint_ring(names, field)
    cs = [parse_poly(e["c_value"], ring) for e in sorted(coeffs, key=lambda e: e["index"])]
    basis = [parse_poly(t, ring) for t in constraints]
    basis = groebner_basis(basis) if basis else []
    s = SolutionDescription(
        field=field, n=F.order(), ell=len(cs) - 1, status=status, ring=ring,
        coefficients=cs, free_vars=names, constraints=basis,
        dimension_bound=rec.get("dimension_bound", 0), provenance=rec.get("provenance", {}))
    return F, s


def format_solution(rec: dict) -> str:
    lines = [f"status: {rec['status']}", f"order: {rec['order']}"]
    if rec.get("message"):
        lines.append(f"message: {rec['message']}")
    prov = " ".join(f"{k}={v}" for k, v in rec["provenance"].items())
    if prov:
        lines.append(f"provenance: {prov}")
    if rec["status"] == "empty":
        return "\n".join(lines) + "\n"
    lines.append("free: " + (", ".join(rec["free_vars"]) or "(none)"))
    lines.append("constraints: " + ("; ".join(f"{g} = 0" for g in rec["constraints"])
                                    or "(none)"))
    for name, v in rec["conditions"].items():
        lines.append(f"condition: {name} = {v}")
    lines.append("coefficients:")
    for e in rec["coefficients"]:
        lines.append(f"  c_{e['index']} = {e['c_value']}    [x^{e['index']}] {e['series_value']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args, out):
    field = _field_from_args(args)
    F = parse_diffpoly(args.equation, field)
    c = parse_tuple(args.initial, field)
    if not c:
        raise UsageError("--initial must contain at least one entry")
    ell = args.order if args.order is not None else max(DEFAULT_ORDER, len(c) - 1)
    if ell < len(c) - 1:
        raise UsageError(f"--order must be at least {len(c) - 1} for this tuple")
    s = solve(F, c, ell, args.bound)
    rec = solution_record(F, args.equation, field, s)
    out.write(json.dumps(rec, indent=2) + "\n" if args.json else format_solution(rec))
    return EXIT_EMPTY if s.is_empty() else EXIT_OK


def cmd_vanishing_order(args, out):
    field = _field_from_args(args)
    F = parse_diffpoly(args.equation, field)
    bound = args.bound if args.bound is not None else DEFAULT_BOUND
    if args.local:
        if not args.initial:
            raise UsageError("local mode needs --initial")
        c = parse_tuple(args.initial, field)
        if any(isinstance(v, str) for v in c):
            raise UsageError("local mode needs a concrete tuple")
        rep = local_vanishing_order(F, c, bound)
        cap = None
    else:
        rep = global_vanishing_order(F, bound)
        cap = quasilinear_bound(F)
    rec = {"kind": rep.kind, "order": rep.order, "bound": rep.bound, "cap": cap,
           "result": rep.describe()}
    if args.json:
        out.write(json.dumps(rec, indent=2) + "\n")
    else:
        out.write(f"{rep.kind} vanishing order: {rep.describe()}\n")
        if cap is not None:
            out.write(f"quasilinear cap: {cap}\n")
        if not rep.found and rep.kind == "global":
            out.write("warning: a bounded search that finds nothing is inconclusive\n")
    return EXIT_OK


def cmd_inspect(args, out):
    field = _field_from_args(args)
    F = parse_diffpoly(args.equation, field)
    what = args.what
    if what == "jet-ideal":
        lines = jet_ideal(F, args.m).render()
    elif what == "separant":
        if args.i is None:
            lines = [separant(F).render()]
        else:
            g = gen_separant(F, args.i, args.k)
            lines = [g.render()]
    elif what == "separant-matrix":
        lines = ["[" + ", ".join(e.render() for e in row) + "]"
                 for row in separant_matrix(F, args.m)]
    elif what == "derivative":
        lines = [F.diff(args.k if args.k is not None else 1).render()]
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown inspect target {what}")
    if args.json:
        out.write(json.dumps({"target": what, "result": lines}, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    try:
        if args.record == "-":
            rec = json.load(sys.stdin)
        else:
            with open(args.record, encoding="utf-8") as fh:
                rec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read solution record: {exc}") from None
    if not isinstance(rec, dict):
        raise UsageError("malformed solution record")
    F, s = record_to_solution(rec)
    ok = verify_truncation(F, s)
    if args.json:
        out.write(json.dumps({"verified": ok}) + "\n")
    else:
        out.write("verified\n" if ok else "verification failed\n")
    return EXIT_OK if ok else EXIT_EMPTY


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=("rational", "gaussian", "param"), default="rational")
    common.add_argument("--params", help="comma-separated parameter names (param field)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p = argparse.ArgumentParser(prog="fpsaode", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="extend an initial tuple")
    s.add_argument("--equation", "-e", required=True)
    s.add_argument("--initial", "-c", required=True,
                   help="comma-separated values of y(0), y'(0), ...; bare names are unknowns")
    s.add_argument("--order", "-l", type=int, help="truncation order")
    s.add_argument("--bound", type=int, help="search bound for the global order")
    s.set_defaults(run=cmd_solve)

    v = sub.add_parser("vanishing-order", parents=[common], help="local or global order")
    v.add_argument("--equation", "-e", required=True)
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--local", action="store_true")
    mode.add_argument("--global", dest="local", action="store_false")
    v.add_argument("--initial", "-c")
    v.add_argument("--bound", type=int)
    v.set_defaults(run=cmd_vanishing_order)

    i = sub.add_parser("inspect", parents=[common], help="print derived objects")
    i.add_argument("what", choices=("jet-ideal", "separant", "separant-matrix", "derivative"))
    i.add_argument("--equation", "-e", required=True)
    i.add_argument("--m", type=int, default=0)
    i.add_argument("--i", type=int, help="generalized separant index (symbolic in t)")
    i.add_argument("--k", type=int, help="concrete k for separants, derivative order")
    i.set_defaults(run=cmd_inspect)

    w = sub.add_parser("verify", parents=[common], help="back-substitute a solve record")
    w.add_argument("record", help="path to a JSON record, or - for stdin")
    w.set_defaults(run=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for name in ("bound", "m", "i", "k"):
            v = getattr(args, name, None)
            if v is not None and v < 0:
                raise UsageError(f"--{name} must be nonnegative")
        return args.run(args, out)
    except AodeError as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        else:
            print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_status
    finally:
        if out is not sys.stdout:
            out.close()


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
