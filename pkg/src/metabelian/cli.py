"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 parse error, 3 precondition violated.
Results go to stdout and are byte-identical across runs; per-stage wall-clock
timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import checks, lieadm, novikov
from .oracle import (
    ORACLE_DEGREE_CAP,
    IdentitySet,
    consequence_basis,
    dim_multilinear,
    parse_identity_file,
    variety as named_variety,
)
from .terms import (
    DEFAULT_DEGREE_CAP,
    POL_SIG,
    STAR,
    STAR_SIG,
    DegreeCapError,
    Poly,
    TermError,
    check_cap,
    format_term,
    leaves,
    ops,
    parse_poly,
    parse_term,
)

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3

ORACLE_VARIETIES = ("novikov", "mnov", "lieadm", "mlieadm", "custom")
STRUCTURED = ("mnov", "mlieadm")
SUITES = ("identities", "basis", "table", "all")


class Precondition(Exception):
    pass


@contextmanager
def stage(name):
    start = time.perf_counter()
    yield
    print(f"timing {name}: {(time.perf_counter() - start) * 1000:.0f} ms", file=sys.stderr)


def _emit(args, data, text_lines):
    if args.json:
        print(json.dumps(data, ensure_ascii=False, indent=2))
    else:
        for line in text_lines:
            print(line)


def _oracle_cap(args):
    return max(ORACLE_DEGREE_CAP, args.max_cost or 0)


def _enum_cap(args):
    return max(DEFAULT_DEGREE_CAP, args.max_cost or 0)


def _require_structured(args):
    if args.variety not in STRUCTURED:
        raise Precondition(f"{args.command} needs --variety mnov or mlieadm")


def _identity_set(args) -> IdentitySet:
    if args.variety == "custom":
        if not args.identities:
            raise Precondition("--variety custom needs --identities <path>")
        return _load_identities(args.identities)
    return named_variety(args.variety)


def _load_identities(path) -> IdentitySet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise Precondition(f"cannot read identity file: {exc}") from None
    return parse_identity_file(text, Path(path).stem)


def _coef(c):
    return f"{c.numerator}/{c.denominator}"


# -- commands -------------------------------------------------------------------------

def cmd_dims(args) -> int:
    if args.max_degree < 1:
        raise Precondition("--max-degree must be at least 1")
    method = args.method
    if method in ("basis", "both"):
        _require_structured(args)
        check_cap(args.max_degree, _enum_cap(args))
    if method in ("oracle", "both"):
        ids = _identity_set(args)
        check_cap(args.max_degree, _oracle_cap(args))
    basis_dims = {"mnov": novikov.nov_dims, "mlieadm": lieadm.mla_dims}.get(args.variety)
    rows = []
    for n in range(1, args.max_degree + 1):
        row = {"degree": n}
        if method in ("basis", "both"):
            with stage(f"basis degree {n}"):
                row["basis"] = basis_dims(n)
        if method in ("oracle", "both"):
            with stage(f"oracle degree {n}"):
                row["oracle"] = dim_multilinear(ids, n, _oracle_cap(args))
        if method == "both":
            row["match"] = row["basis"] == row["oracle"]
        rows.append(row)
    if method == "both":
        lines = ["degree basis oracle match"]
        lines += [f"{r['degree']} {r['basis']} {r['oracle']} {'yes' if r['match'] else 'NO'}" for r in rows]
    else:
        lines = [" ".join(str(r[method]) for r in rows)]
    _emit(args, {"variety": args.variety, "method": method, "rows": rows}, lines)
    return EXIT_OK if all(r.get("match", True) for r in rows) else EXIT_CHECK


def _input_poly(args, signature=None) -> tuple:
    if bool(args.term) == bool(args.poly):
        raise Precondition("give exactly one of --term or --poly")
    text = args.term or args.poly
    if args.term:
        return text, Poly.term(parse_term(text, signature))
    return text, parse_poly(text, signature)


def cmd_nf(args) -> int:
    _require_structured(args)
    if args.variety == "mnov":
        text, p = _input_poly(args, STAR_SIG)
        check_cap(max(p.degrees(), default=1), _enum_cap(args))
        result = novikov.nov_nf(p)
    else:
        text, p = _input_poly(args)
        check_cap(max(p.degrees(), default=1), _enum_cap(args))
        if any(STAR in ops(t) for t in p.terms):
            p = lieadm.polarize(p)
        result = lieadm.mla_nf(p)
    data = {
        "variety": args.variety,
        "input": text,
        "normal_form": [{"coef": _coef(c), "term": format_term(t)} for t, c in result.items()],
    }
    _emit(args, data, [str(result)])
    return EXIT_OK


def cmd_basis(args) -> int:
    _require_structured(args)
    vars_ = args.vars if args.vars is not None else args.degree
    if args.degree < 1 or vars_ < 1:
        raise Precondition("--degree and --vars must be at least 1")
    if args.multilinear and vars_ < args.degree:
        raise Precondition("--multilinear needs --vars >= --degree")
    check_cap(args.degree, _enum_cap(args))
    build = novikov.nov_basis if args.variety == "mnov" else lieadm.mla_basis
    with stage("basis"):
        monomials = build(args.degree, vars_, args.multilinear)
    text = [format_term(t) for t in monomials]
    data = {
        "variety": args.variety,
        "degree": args.degree,
        "vars": vars_,
        "multilinear": args.multilinear,
        "monomials": text,
        "count": len(text),
    }
    _emit(args, data, text + [f"count={len(text)}"])
    return EXIT_OK


def _report_checks(args, suite, found, extra=None) -> int:
    data = {"suite": suite, "checks": [{"name": c.name, "pass": c.passed, "detail": c.detail} for c in found]}
    if extra:
        data.update(extra)
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}" + (f" ({c.detail})" if c.detail else "") for c in found]
    ok = all(c.passed for c in found)
    lines.append(f"{sum(c.passed for c in found)}/{len(found)} checks passed")
    _emit(args, data, lines)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_sym(args) -> int:
    _require_structured(args)
    n = args.degree
    if n < 1:
        raise Precondition("--degree must be at least 1")
    check_cap(n, _enum_cap(args))
    if args.verify:
        check_cap(n, _oracle_cap(args))
    if args.variety == "mnov":
        gens = novikov.nov_sym_generators(n)
        run = checks.nov_sym_checks
    else:
        gens = [(label, p) for _, label, p in lieadm.mla_sym_generators(n)]
        run = checks.mla_sym_checks
    found = []
    if args.verify:
        with stage("sym checks"):
            found = run(n)
    by_label = {}
    for c in found:
        label = c.name.split(" ", 1)[0]
        by_label.setdefault(label, {})[c.name.split(" ", 1)[1]] = c.passed
    generators = []
    for label, p in gens:
        entry = {"label": label, "poly": str(p)}
        if args.verify:
            entry["checks"] = by_label.get(label, {})
        generators.append(entry)
    data = {"variety": args.variety, "degree": n, "generators": generators}
    if args.verify:
        data["summary"] = [{"name": c.name, "pass": c.passed, "detail": c.detail} for c in found]
    lines = [f"{label} = {p}" for label, p in gens]
    lines += [f"{'PASS' if c.passed else 'FAIL'} {c.name}" + (f" ({c.detail})" if c.detail else "") for c in found]
    if args.verify:
        lines.append(f"{sum(c.passed for c in found)}/{len(found)} checks passed")
    _emit(args, data, lines)
    return EXIT_OK if all(c.passed for c in found) else EXIT_CHECK


def _suite(variety, suite, n):
    nov = variety == "mnov"
    out = []
    if suite in ("identities", "all"):
        out += checks.nov_identity_checks(max(n, 4)) if nov else checks.mla_identity_checks(max(n, 4))
    if suite in ("basis", "all"):
        out += checks.nov_basis_checks(n) if nov else checks.mla_basis_checks(n)
    if suite in ("table", "all") and n >= 2:
        out += checks.nov_table_checks(n) if nov else checks.mla_table_checks(n)
    if suite == "all":
        if nov:
            out += checks.nov_nf_checks(n) + checks.diffcom_checks(n)
        else:
            out += checks.mla_nf_checks(n) + checks.mla_soundness_checks(n, sample=500)
            out += checks.mla_component_checks(n)
    return out


def cmd_verify(args) -> int:
    _require_structured(args)
    if args.degree < 1:
        raise Precondition("--degree must be at least 1")
    check_cap(args.degree, _oracle_cap(args))
    with stage(f"verify {args.suite}"):
        found = _suite(args.variety, args.suite, args.degree)
    return _report_checks(args, args.suite, found)


def cmd_reduce(args) -> int:
    if not args.identities:
        raise Precondition("reduce needs --identities <path>")
    ids = _load_identities(args.identities)
    text, p = _input_poly(args)
    n = args.degree
    for t in p.terms:
        if sorted(leaves(t)) != list(range(1, n + 1)):
            raise Precondition(f"{format_term(t)} is not multilinear in x1..x{n}")
    sig = frozenset().union(*(ops(t) for t in p.terms)) if p else ids.signature
    if not ids.identities and sig:
        ids = IdentitySet(ids.name, STAR_SIG if sig <= STAR_SIG else POL_SIG, ())
    if not sig <= ids.signature:
        raise TermError("polynomial uses operations outside the identity file's signature")
    check_cap(n, _oracle_cap(args))
    with stage("reduce"):
        basis = consequence_basis(ids, n, cap=_oracle_cap(args))
        reduced = basis.reduce(p)
    data = {
        "identities": str(args.identities),
        "degree": n,
        "input": text,
        "reduced": [{"coef": _coef(c), "term": format_term(t)} for t, c in reduced.items()],
        "consequence": not reduced,
    }
    _emit(args, data, [str(reduced), f"consequence={'true' if not reduced else 'false'}"])
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metabelian", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-cost", type=int, metavar="DEGREE",
                        help=f"raise the degree caps (oracle {ORACLE_DEGREE_CAP}, enumeration {DEFAULT_DEGREE_CAP})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="dimension of each multilinear component")
    p.add_argument("--variety", choices=ORACLE_VARIETIES, required=True)
    p.add_argument("--identities", help="identity file for --variety custom")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--method", choices=("basis", "oracle", "both"), default="basis")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("nf", parents=[common], help="normal form of a term or polynomial")
    p.add_argument("--variety", choices=STRUCTURED, required=True)
    p.add_argument("--term")
    p.add_argument("--poly")
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("basis", parents=[common], help="list basis monomials")
    p.add_argument("--variety", choices=STRUCTURED, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--vars", type=int, help="alphabet size (default: the degree)")
    p.add_argument("--multilinear", action="store_true")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("sym", parents=[common], help="symmetric generators")
    p.add_argument("--variety", choices=STRUCTURED, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="check invariance, nonvanishing and spanning")
    p.set_defaults(func=cmd_sym)

    p = sub.add_parser("verify", parents=[common], help="cross-validation suites")
    p.add_argument("--variety", choices=STRUCTURED, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", parents=[common], help="reduce modulo a custom identity file")
    p.add_argument("--identities", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--poly")
    p.add_argument("--term")
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TermError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (Precondition, DegreeCapError, ValueError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
