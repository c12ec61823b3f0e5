"""Command-line front end.

``decide`` exits 0 for nonmaximal phaseless rank and 1 for maximal; every
command exits 2 on malformed input.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .applications import cpsd_lift_witness, cpsd_upper_bound, ngon, slack_matrix
from .errors import ParseError
from .formats import (
    format_vector,
    parse_rational_rows,
    phased_items,
    read_matrix,
    read_polytope,
    render_keyvalue,
    write_keyvalue,
)
from .matrix import ComparisonMatrix, comparison_matrix, numerical_rank, rational_rank
from .mmatrix import Method, is_nonsingular_m_matrix
from .rank import (
    WITNESS_RANK_TOL,
    amoeba_membership,
    bracket,
    decide_nonmaximal,
    signless_lower_bound,
    signless_rank_bruteforce,
)
from .scan import MAX_RESOLUTION, get_family, render_csv, render_svg, scan

EXIT_NONMAXIMAL, EXIT_MAXIMAL, EXIT_ERROR = 0, 1, 2


def _emit(items, out_path=None):
    text = render_keyvalue(items)
    sys.stdout.write(text)
    if out_path:
        write_keyvalue(out_path, items)


def cmd_decide(args):
    A = read_matrix(args.matrix)
    d = decide_nonmaximal(A)
    items = [("verdict", "nonmaximal" if d.is_nonmaximal else "maximal"),
             ("transposed", str(d.transposed).lower())]
    if d.boundary_uncertain:
        items.append(("boundary_uncertain", "true"))
    if d.is_nonmaximal:
        items.append(("weights", format_vector(d.weights)))
        items += phased_items(d.witness, "witness_")
        items.append(("witness_rank", numerical_rank(d.witness, args.tol)))
    else:
        items += [("permutation", format_vector(d.permutation)),
                  ("scaling", format_vector(d.scaling)),
                  ("columns", format_vector(d.columns))]
        if d.farkas is not None:
            items.append(("farkas", format_vector(d.farkas.certificate)))
    _emit(items, args.certificate)
    return EXIT_NONMAXIMAL if d.is_nonmaximal else EXIT_MAXIMAL


def cmd_bracket(args):
    A = read_matrix(args.matrix)
    b = bracket(A, effort=args.effort, seed=args.seed, restarts=args.restarts)
    upper_source = b.upper_source.value + (f"(k={b.patching_k})" if b.patching_k else "")
    items = [("bracket", f"[{b.lower}, {b.upper}]"), ("lower", b.lower), ("upper", b.upper),
             ("lower_source", b.lower_source.value), ("upper_source", upper_source),
             ("exact", str(b.exact).lower())]
    if b.upper_witness is not None:
        items.append(("witness_rank", numerical_rank(b.upper_witness, args.tol)))
    _emit(items)
    if args.witness and b.upper_witness is not None:
        write_keyvalue(args.witness, phased_items(b.upper_witness))
    return 0


def cmd_signless(args):
    A = read_matrix(args.matrix)
    _emit([("signless_rank", signless_rank_bruteforce(A)), ("lower_bound", signless_lower_bound(A)),
           ("rank", rational_rank(A))])
    return 0


def cmd_mmatrix(args):
    with open(args.matrix, encoding="utf-8") as fh:
        rows = parse_rational_rows(fh.read())
    Z = comparison_matrix(rows) if args.comparison else ComparisonMatrix(rows)
    report = is_nonsingular_m_matrix(Z, Method(args.method))
    items = [("m_matrix", str(report.verdict).lower()), ("method", report.method.value)]
    if report.certificate is not None:
        items.append(("certificate", format_vector(report.certificate)))
    _emit(items)
    return 0 if report.verdict else 1


def _range(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected LO:HI")
    return Fraction(lo), Fraction(hi)


def cmd_scan(args):
    template = None
    if args.family == "custom":
        if not args.template:
            raise ParseError("--family custom needs --template")
        with open(args.template, encoding="utf-8") as fh:
            template = fh.read()
    family = get_family(args.family, template)
    if not 1 <= args.grid <= MAX_RESOLUTION:
        raise ValueError(f"--grid must lie in [1, {MAX_RESOLUTION}]")
    grid = scan(family, args.grid, method=args.method, threads=args.threads,
                s_range=args.s_range, t_range=args.t_range)
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8") as fh:
            fh.write(render_csv(grid))
    if args.out_svg:
        with open(args.out_svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(grid))
    items = [("family", grid.family), ("resolution", grid.resolution), ("method", grid.method)]
    items += [(f"count_{v.value}", n) for v, n in grid.counts().items()]
    if grid.inner is not None:
        items.append(("count_inner", sum(grid.inner)))
    _emit(items)
    return 0


def cmd_slack(args):
    if args.ngon is not None:
        P = ngon(args.ngon)
    elif args.polytope:
        P = read_polytope(args.polytope)
    else:
        raise ParseError("give --ngon N or a polytope file")
    S = slack_matrix(P)
    witness = cpsd_lift_witness(P)
    items = [("slack", [format_vector(r) for r in S.rows]), ("slack_rank", rational_rank(S)),
             ("cpsd_upper_bound", cpsd_upper_bound(P)),
             ("witness_rank", numerical_rank(witness, args.tol))]
    _emit(items)
    if args.witness:
        write_keyvalue(args.witness, phased_items(witness))
    return 0


def cmd_amoeba(args):
    point = [float(x) if args.log else Fraction(x) for x in args.point.split(",")]
    member = amoeba_membership(point, args.rows, args.cols, log_scale=args.log)
    _emit([("member", str(member).lower())])
    return 0 if member else 1


def build_parser():
    p = argparse.ArgumentParser(prog="phaserank", description="Phaseless rank decisions, bounds and region scans.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--tol", type=float, default=WITNESS_RANK_TOL, help="numerical rank tolerance for reported witnesses")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decide", help="decide whether the phaseless rank is below min(n, m)")
    s.add_argument("matrix")
    s.add_argument("--certificate", help="also write the certificate to this file")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("bracket", help="lower and upper bounds on the phaseless rank")
    s.add_argument("matrix")
    s.add_argument("--effort", choices=["low", "high"], default="low")
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--witness", help="write the upper-bound witness to this file")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("signless", help="brute-force signless rank")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_signless)

    s = sub.add_parser("mmatrix", help="nonsingular M-matrix test")
    s.add_argument("matrix")
    s.add_argument("--method", choices=[m.value for m in Method], default=Method.REDUCED_MINORS.value)
    s.add_argument("--comparison", action="store_true", help="test the comparison matrix of a nonnegative input")
    s.set_defaults(func=cmd_mmatrix)

    s = sub.add_parser("scan", help="classify a 2D grid of a matrix family")
    s.add_argument("--family", required=True, choices=["circulant3", "param3x4", "slice5", "custom"])
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--method", choices=["lp", "semialg"], default="lp")
    s.add_argument("--template", help="custom family: CSV of expressions in s and t")
    s.add_argument("--s-range", type=_range)
    s.add_argument("--t-range", type=_range)
    s.add_argument("--out-csv")
    s.add_argument("--out-svg")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("slack", help="slack matrix, complex psd bound and lift witness")
    s.add_argument("polytope", nargs="?")
    s.add_argument("--ngon", type=int)
    s.add_argument("--witness", help="write the lift witness to this file")
    s.set_defaults(func=cmd_slack)

    s = sub.add_parser("amoeba", help="membership in the amoeba of maximal minors")
    s.add_argument("point", help="comma-separated row-major coordinates")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--cols", type=int, required=True)
    s.add_argument("--log", action="store_true", help="coordinates are logarithms of moduli")
    s.set_defaults(func=cmd_amoeba)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
