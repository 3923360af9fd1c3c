"""Command-line front end: ``ahss homology | pages | filtration | verify | gen``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional

from .abgroup import ContainmentError, NotWellDefined
from .cw import (CWComplex, ComplexFormatError, InvalidComplex, dumps_complex, loads_complex,
                 parse_builder, random_complex)
from .spectral import SABOTAGE_MODES, filtration_compare, page, stable_page
from .suite import run_suite
from .theory import (BUILTIN_THEORIES, TheoremViolation, Theory, evaluate, loads_theory,
                     parse_inline_coeffs)

FORMAT_ENV = "AHSS_FORMAT"
FORMATS = ("table", "csv", "json")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def load_complex(args) -> CWComplex:
    if args.complex and args.builder:
        raise InputError("give either --complex or --builder, not both")
    try:
        if args.complex:
            return loads_complex(_read(args.complex))
        if args.builder:
            return parse_builder(args.builder)
    except ComplexFormatError as exc:
        where = args.complex or "--builder"
        raise InputError(f"{where}: {exc}") from exc
    except InvalidComplex as exc:
        raise InputError(f"{args.complex or args.builder}: invalid complex: {exc}") from exc
    raise InputError("no complex given (use --complex FILE or --builder EXPR)")


def load_theory(args) -> Theory:
    if args.theory and args.coeffs:
        raise InputError("give either --theory or --coeffs, not both")
    if args.coeffs:
        try:
            return parse_inline_coeffs(args.coeffs)
        except ComplexFormatError as exc:
            raise InputError(f"--coeffs: {exc}") from exc
    if not args.theory:
        return BUILTIN_THEORIES["Z"]
    if args.theory in BUILTIN_THEORIES:
        return BUILTIN_THEORIES[args.theory]
    try:
        return loads_theory(_read(args.theory))
    except (ComplexFormatError, ValueError) as exc:
        raise InputError(f"{args.theory}: {exc}") from exc


def output_format(args) -> str:
    fmt = args.format or os.environ.get(FORMAT_ENV) or "table"
    if fmt not in FORMATS:
        raise InputError(f"unknown output format {fmt!r} (choose from {', '.join(FORMATS)})")
    return fmt


def render(rows: list[dict], columns: list[str], fmt: str, title: str = "") -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)
        return buf.getvalue()
    cells = [[str(c) for c in columns]] + [[str(row[c]) for c in columns] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    lines = [title] if title else []
    for k, r in enumerate(cells):
        lines.append("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _range(lo: Optional[int], hi: Optional[int], default_lo: int, default_hi: int) -> range:
    return range(default_lo if lo is None else lo, (default_hi if hi is None else hi) + 1)


# commands ---------------------------------------------------------------------


def cmd_homology(args) -> int:
    X, h, fmt = load_complex(args), load_theory(args), output_format(args)
    degrees = _range(args.n_min, args.n_max, 0, max(X.dimension, 0) + max(h.q_max, 0))
    qs = list(h.degrees)
    graded = len(qs) > 1
    columns = ["n"] + ([f"q={q}" for q in qs] if graded else []) + ["h_n(X)"]
    rows = []
    for n in degrees:
        v = evaluate(h, X, n)
        row = {"n": n}
        if graded:
            for q in qs:
                H = v.summand(q)
                row[f"q={q}"] = str(H.group) if H is not None else "0"
        row["h_n(X)"] = str(v.group)
        rows.append(row)
    sys.stdout.write(render(rows, columns, fmt, f"h = {h}"))
    return EXIT_OK


def cmd_pages(args) -> int:
    X, h, fmt = load_complex(args), load_theory(args), output_format(args)
    r_lo = 2 if args.r_min is None else args.r_min
    if r_lo < 2:
        raise InputError("pages start at r = 2")
    rs = _range(r_lo, args.r_max, 2, max(stable_page(X), 2))
    ps = range(0, X.dimension + 1)
    qs = range(0, max(h.q_max, 0) + 1)
    n_ok = (lambda n: (args.n_min is None or n >= args.n_min) and
            (args.n_max is None or n <= args.n_max))
    status = EXIT_OK
    rows = []
    for r in rs:
        for p in ps:
            for q in qs:
                if not n_ok(p + q):
                    continue
                pg = page(h, X, r, p, q, compare=args.both_forms, sabotage=args.sabotage)
                row = {"r": r, "p": p, "q": q, "page": str(pg.couple.group)}
                if args.both_forms:
                    iso = pg.comparison_iso if args.sabotage is None else pg.agree
                    row.update(couple=str(pg.couple.group),
                               truncation=str(pg.truncation.group),
                               agree="yes" if pg.agree and iso else "NO")
                    if row["agree"] == "NO":
                        status = EXIT_VIOLATION
                rows.append(row)
    if fmt != "table" or args.both_forms:
        columns = ["r", "p", "q"] + (["couple", "truncation", "agree"] if args.both_forms
                                     else ["page"])
        if args.both_forms:
            for row in rows:
                del row["page"]
        sys.stdout.write(render(rows, columns, fmt, f"h = {h}"))
        return status
    out = [f"h = {h}"]
    for r in rs:
        grid = [{"q": q, **{f"p={p}": row["page"] for row in rows
                            for p in ps if row["r"] == r and row["q"] == q and row["p"] == p}}
                for q in reversed(qs)]
        columns = ["q"] + [f"p={p}" for p in ps]
        for line in grid:
            for c in columns:
                line.setdefault(c, "")
        out.append(render(grid, columns, "table", f"E^{r}").rstrip("\n"))
    sys.stdout.write("\n\n".join(out) + "\n")
    return status


def cmd_filtration(args) -> int:
    X, h, fmt = load_complex(args), load_theory(args), output_format(args)
    if 0 not in h.degrees:
        raise InputError("the filtration comparison needs a nonzero coefficient group at q = 0")
    rows = []
    status = EXIT_OK
    for p in range(0, X.dimension + 1):
        rep = filtration_compare(h, X, p, args.r_max)
        if not rep.ok:
            status = EXIT_VIOLATION
        couple, trunc, rel = rep.chains
        for r in sorted(couple.levels):
            forms = [str(ch.levels[r].as_group()) for ch in rep.chains]
            rows.append({"p": p, "r": r, couple.provenance: forms[0],
                         trunc.provenance: forms[1], rel.provenance: forms[2],
                         "equal": "yes" if couple.levels[r].equals(trunc.levels[r]) and
                         trunc.levels[r].equals(rel.levels[r]) else "NO"})
    columns = ["p", "r", "couple", "truncation-image", "relative-image", "equal"]
    sys.stdout.write(render(rows, columns, fmt, f"h = {h}, levels F_r of h^(0)_p(X)"))
    return status


def cmd_verify(args) -> int:
    fmt = output_format(args)
    corpus = None
    if args.complex or args.builder:
        corpus = [(args.complex or args.builder, load_complex(args))]
    theories = args.theory_names or None
    for t in theories or []:
        if t not in BUILTIN_THEORIES:
            raise InputError(f"unknown builtin theory {t!r}")
    report = run_suite(seed=args.seed, random_count=args.random, budget=args.budget,
                       theories=theories, sabotage=args.sabotage, jobs=args.jobs,
                       include_builders=not args.no_builders, corpus=corpus)
    if fmt == "table":
        sys.stdout.write(report.render())
    else:
        rows = [{"statement": s, "instance": i, "witness": w} for s, i, w in report.violations()]
        if fmt == "json":
            sys.stdout.write(json.dumps(report.summary(), indent=2, ensure_ascii=False) + "\n")
        else:
            sys.stdout.write(render(rows, ["statement", "instance", "witness"], "csv"))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_gen(args) -> int:
    if args.budget < 0:
        raise InputError("budget must be >= 0")
    text = dumps_complex(random_complex(args.seed, args.budget))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ahss", description="Exact Atiyah-Hirzebruch pages for finite CW complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def inputs(p, theory=True):
        p.add_argument("--complex", metavar="FILE", help="complex file (JSON)")
        p.add_argument("--builder", metavar="EXPR", help="builder expression, e.g. 'rp(3)'")
        if theory:
            p.add_argument("--theory", metavar="NAME|FILE",
                           help=f"builtin ({', '.join(BUILTIN_THEORIES)}) or theory file")
            p.add_argument("--coeffs", metavar="INLINE", help="inline coefficients, e.g. '0:Z,1:Z/2'")

    def fmt(p):
        p.add_argument("--format", choices=FORMATS,
                       help=f"output format (default: ${FORMAT_ENV} or table)")

    p = sub.add_parser("homology", help="h_n(X) = sum over q of H_{n-q}(X; h_q)")
    inputs(p)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    fmt(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("pages", help="E^r_{p,q} grids")
    inputs(p)
    p.add_argument("--r-min", type=int)
    p.add_argument("--r-max", type=int)
    p.add_argument("--n-min", type=int, help="lowest total degree p + q shown")
    p.add_argument("--n-max", type=int, help="highest total degree p + q shown")
    p.add_argument("--both-forms", action="store_true",
                   help="print couple and truncation forms with an agreement flag")
    p.add_argument("--sabotage", choices=SABOTAGE_MODES, help=argparse.SUPPRESS)
    fmt(p)
    p.set_defaults(func=cmd_pages)

    p = sub.add_parser("filtration", help="the three q = 0 filtrations of h_p(X)")
    inputs(p)
    p.add_argument("--r-max", type=int)
    fmt(p)
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("verify", help="run the verification suite")
    inputs(p, theory=False)
    p.add_argument("--theory", dest="theory_names", action="append", metavar="NAME",
                   help="restrict to builtin theories (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=50, metavar="N",
                   help="number of seeded random complexes (default 50)")
    p.add_argument("--budget", type=int, default=40, help="cell budget for random complexes")
    p.add_argument("--no-builders", action="store_true", help="skip the named builder corpus")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--sabotage", choices=SABOTAGE_MODES,
                   help="inject a fault (harness self-test)")
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="emit a seeded random complex file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=40)
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"ahss: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TheoremViolation, ContainmentError, NotWellDefined) as exc:
        print(f"ahss: violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"ahss: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
