"""Command-line front end and flat-file formats.

Brace files (``brace v1``)::

    brace v1
    group 3 3 7
    table            | rule <family> <params...>
    <n rows of n whitespace-separated element indices>

Rows and columns are in canonical mixed-radix element order; entry (a, b)
is the index of a*b.  Rule lines name a construction family:
``trivial``, ``Bpp p``, ``Bp2 p``, ``Tppq p q w m``, ``Tp2q p q w``,
``Bppq p q w m``, ``Bp2q p q w``, ``B22q p q w``, ``B4q p q w m``.
Parsing then serializing a canonical file is byte-identical.

Solution files (``ybe v1``) hold the carrier size n and then n^2 lines
``x y sigma tau`` with sigma = sigma_x(y) and tau = tau_y(x).

Exit codes: 0 success/verified, 1 semantic failure (axiom failure,
mismatch, non-isomorphic), 2 usage or parse error, 3 resource guard.
The environment variable BRACE_GUARD_MAX overrides the order guards.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .braces import Brace, check_axioms, trivial_brace
from .config import Guards
from .constructions import (
    ClassificationEntry,
    classify,
    coarse_family,
    count_formula,
    p_squared_brace,
)
from .enumeration import count_braces
from .errors import FormatError, GuardExceeded
from .groups import factorize, is_prime, make_group
from .morphisms import (
    brace_invariants,
    circle_generating_set,
    distinguishing_invariant,
    find_isomorphism,
)
from .ybe import is_involutive, is_nondegenerate, verify_yang_baxter, ybe_solution_from_brace

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_USAGE = 2
EXIT_GUARD = 3

_RULE_FAMILIES = {"Tppq": 2, "Tp2q": 1, "Bppq": 2, "Bp2q": 1, "B22q": 1, "B4q": 2}


# ---------------------------------------------------------------------------
# brace files


def serialize_brace(brace: Brace) -> str:
    lines = ["brace v1"]
    inv = " ".join(str(n) for n in brace.group.invariants)
    lines.append(f"group {inv}".rstrip())
    if brace.rule_spec is not None:
        lines.append("rule " + " ".join(str(t) for t in brace.rule_spec))
    else:
        lines.append("table")
        t = brace.table()
        for a in range(brace.order):
            lines.append(" ".join(str(int(v)) for v in t[a]))
    return "\n".join(lines) + "\n"


def parse_brace(text: str) -> Brace:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "brace v1":
        raise FormatError("missing 'brace v1' header")
    if len(lines) < 3:
        raise FormatError("truncated brace file")
    parts = lines[1].split()
    if not parts or parts[0] != "group":
        raise FormatError("second line must be 'group n1 n2 ...'")
    try:
        group = make_group(int(x) for x in parts[1:])
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    body = lines[2].split()
    if body and body[0] == "rule":
        return _brace_from_rule_line(group, body[1:])
    if body != ["table"]:
        raise FormatError("third line must be 'table' or 'rule ...'")
    n = group.order
    rows = [ln.split() for ln in lines[3:] if ln.strip()]
    if len(rows) != n:
        raise FormatError(f"expected {n} table rows, found {len(rows)}")
    try:
        table = np.array([[int(v) for v in row] for row in rows], dtype=np.int64)
    except ValueError as exc:
        raise FormatError(f"bad table entry: {exc}") from exc
    if table.shape != (n, n):
        raise FormatError("table is not square")
    if n and (table.min() < 0 or table.max() >= n):
        raise FormatError("table entry out of range")
    return Brace.from_table(group, table)


def _brace_from_rule_line(group, tokens) -> Brace:
    if not tokens:
        raise FormatError("empty rule line")
    name, args = tokens[0], tokens[1:]
    try:
        ints = [int(a) for a in args]
    except ValueError as exc:
        raise FormatError(f"bad rule parameter: {exc}") from exc
    try:
        if name == "trivial":
            if ints:
                raise FormatError("rule trivial takes no parameters")
            return trivial_brace(group)
        if name in ("Bpp", "Bp2"):
            if len(ints) != 1:
                raise FormatError(f"rule {name} takes exactly one parameter")
            brace = p_squared_brace(ints[0], name)
        elif name in _RULE_FAMILIES:
            nparams = _RULE_FAMILIES[name]
            if len(ints) != 2 + nparams:
                raise FormatError(f"rule {name} takes p q and {nparams} parameter(s)")
            p, q = ints[0], ints[1]
            brace = coarse_family(p, q, name, ints[2:]).brace
        else:
            raise FormatError(f"unknown rule family {name!r}")
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if brace.group != group:
        raise FormatError(
            f"group line {list(group.invariants)} does not match rule "
            f"(expected {list(brace.group.invariants)})"
        )
    return brace


def load_brace(path: str) -> Brace:
    return parse_brace(Path(path).read_text())


# ---------------------------------------------------------------------------
# solution files


def serialize_solution(sol) -> str:
    lines = ["ybe v1", str(sol.n)]
    for x in range(sol.n):
        for y in range(sol.n):
            lines.append(f"{x} {y} {int(sol.sigma[x, y])} {int(sol.tau[x, y])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _axiom_report_lines(report):
    order = (("B1", report.b1, "b1"), ("B2", report.b2, "b2"),
             ("B3", report.b3, "b3"), ("zero", report.zero_laws, "zero"))
    out = []
    for label, ok, key in order:
        if ok:
            out.append(f"{label} pass")
        else:
            ce = " ".join(str(v) for v in report.counterexamples.get(key, ()))
            out.append(f"{label} fail counterexample {ce}".rstrip())
    return out


def cmd_verify(args) -> int:
    try:
        brace = load_brace(args.path)
    except (FormatError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    guards = Guards.from_env()
    report = check_axioms(brace, guards)
    if args.format == "json":
        payload = {
            "b1": report.b1,
            "b2": report.b2,
            "b3": report.b3,
            "zero_laws": report.zero_laws,
            "ok": report.ok,
            "counterexamples": {k: list(v) for k, v in sorted(report.counterexamples.items())},
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in _axiom_report_lines(report):
            print(line)
        print("verdict " + ("pass" if report.ok else "fail"))
    return EXIT_OK if report.ok else EXIT_SEMANTIC


def _entry_record(entry: ClassificationEntry) -> dict:
    brace = entry.brace
    inv = brace_invariants(brace)
    return {
        "label": entry.label,
        "family": entry.family,
        "params": list(entry.params),
        "invariants": {
            "additive": list(brace.group.invariants),
            "socle_order": inv["socle_order"],
            "adjoint_exponent": inv["adjoint_exponent"],
            "adjoint_abelian": inv["adjoint_abelian"],
        },
    }


def cmd_classify(args) -> int:
    p, q = args.p, args.q
    try:
        entries = classify(p, q, relaxed=args.relaxed, guards=Guards.from_env())
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = [_entry_record(e) for e in entries]
    expected = count_formula(p, q, relaxed=args.relaxed)
    if args.emit_dir:
        out = Path(args.emit_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, entry in enumerate(entries):
            fname = f"{i:02d}_{entry.family}_" + "_".join(str(v) for v in entry.params)
            (out / f"{fname}.brace").write_text(serialize_brace(entry.brace))
    if args.format == "json":
        print(json.dumps({"p": p, "q": q, "count": expected, "entries": records}, sort_keys=True))
    else:
        for rec in records:
            inv = rec["invariants"]
            print(
                f"{rec['label']} family={rec['family']} "
                f"params={','.join(str(v) for v in rec['params'])} "
                f"additive={','.join(str(v) for v in inv['additive'])} "
                f"adjoint_exp={inv['adjoint_exponent']} "
                f"adjoint_abelian={1 if inv['adjoint_abelian'] else 0} "
                f"socle={inv['socle_order']}"
            )
        print(f"total {expected}")
    return EXIT_OK


def _formula_count(n: int) -> int:
    fac = factorize(n)
    primes = sorted(fac)
    if sorted(fac.values()) == [1, 2] and len(primes) == 2:
        p = next(r for r in primes if fac[r] == 2)
        q = next(r for r in primes if fac[r] == 1)
        return count_formula(p, q)
    raise ValueError(f"{n} is not of the form p^2*q with q > p+1")


def cmd_count(args) -> int:
    n = args.n
    values = []
    try:
        if args.method in ("enumerate", "both"):
            values.append(count_braces(n, Guards.from_env()))
        if args.method in ("formula", "both"):
            values.append(_formula_count(n))
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(" ".join(str(v) for v in values))
    if args.method == "both" and values[0] != values[1]:
        return EXIT_SEMANTIC
    return EXIT_OK


def cmd_iso(args) -> int:
    try:
        a = load_brace(args.path_a)
        b = load_brace(args.path_b)
    except (FormatError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if a.order != b.order:
        print(f"error: orders differ ({a.order} vs {b.order})", file=sys.stderr)
        return EXIT_USAGE
    guards = Guards.from_env()
    try:
        witness = find_isomorphism(a, b, guards)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    if witness is not None:
        print("isomorphic")
        print("witness " + " ".join(str(v) for v in witness.group_map.images))
        return EXIT_OK
    reason = distinguishing_invariant(a, b) or "exhaustive-search"
    print(f"not-isomorphic {reason}")
    return EXIT_SEMANTIC


def cmd_ybe(args) -> int:
    try:
        brace = load_brace(args.path)
    except (FormatError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    guards = Guards.from_env()
    try:
        sol = ybe_solution_from_brace(brace, guards)
        yb = verify_yang_baxter(sol, guards)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    inv = is_involutive(sol)
    nondeg = is_nondegenerate(sol)
    if args.out:
        Path(args.out).write_text(serialize_solution(sol))
    print(
        f"YB={'pass' if yb else 'fail'} "
        f"involutive={'pass' if inv else 'fail'} "
        f"nondegenerate={'pass' if nondeg else 'fail'}"
    )
    return EXIT_OK if (yb and inv and nondeg) else EXIT_SEMANTIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bracekit",
        description="construct, verify, classify and enumerate finite left braces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="check the brace axioms of a brace file")
    pv.add_argument("path")
    pv.add_argument("--format", choices=("text", "json"), default="text")
    pv.set_defaults(fn=cmd_verify)

    pc = sub.add_parser("classify", help="list the braces of order p^2*q up to isomorphism")
    pc.add_argument("p", type=int)
    pc.add_argument("q", type=int)
    pc.add_argument("--relaxed", action="store_true",
                    help="allow any q not dividing (p-1)p(p+1) instead of q > p+1")
    pc.add_argument("--emit-dir", default=None, help="write one brace file per entry")
    pc.add_argument("--format", choices=("text", "json"), default="text")
    pc.set_defaults(fn=cmd_classify)

    pn = sub.add_parser("count", help="count isomorphism classes of braces of order n")
    pn.add_argument("n", type=int)
    pn.add_argument("--method", choices=("enumerate", "formula", "both"), default="enumerate")
    pn.set_defaults(fn=cmd_count)

    pi = sub.add_parser("iso", help="decide whether two brace files are isomorphic")
    pi.add_argument("path_a")
    pi.add_argument("path_b")
    pi.set_defaults(fn=cmd_iso)

    py = sub.add_parser("ybe", help="derive and verify the Yang-Baxter solution of a brace")
    py.add_argument("path")
    py.add_argument("--out", default=None, help="write the solution file here")
    py.set_defaults(fn=cmd_ybe)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
