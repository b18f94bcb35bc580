"""Command-line front end.

Subcommands: exact tail queries, bound checks for one (n, p), full proof
verification runs with serialized reports, optimality counterexample search,
and CSV emission of the tail-vs-p curve.

Exit codes: 0 success, 1 verification failure, 2 usage or precondition
violation, 3 comparison undecided at the precision cap, 4 I/O failure.
All decimal output is rendered from exact rationals with round-half-even,
never through binary floating point.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from .enclosure import (
    DEFAULT_PRECISION_BITS,
    PRECISION_CAP,
    PreconditionError,
    UndecidedComparisonError,
    c_enclosure,
    compare_certified,
)
from .binom import BinomialSpec, tail_gt_mean
from .bounds import check_proposition, check_theorem, optimality_search
from .proofs import (
    anderson_samuels_sweep,
    main_proof_sweep,
    verify_appendix,
    verify_proposition_proof,
)
from .report import ProofReport, fraction_str

_VERIFY_DEFAULT_NMAX = {"main": 200, "appendix": 600,
                        "proposition": 200, "anderson-samuels": 100}


@dataclass(frozen=True)
class CurvePoint:
    """One row of the tail-vs-p curve.

    segment: LOW for p below the ln(4/3)/n threshold (certified), MID
    between the threshold and 1/n, HIGH from 1/n up (the point p = 1/n
    belongs to HIGH).
    """

    p: Fraction
    tail: Fraction
    segment: str


def figure_points(n: int, points: int,
                  precision_bits: int = DEFAULT_PRECISION_BITS) -> list[CurvePoint]:
    """Exact curve rows at p = k/points for k = 1..points-1, ascending."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if points < 10:
        raise ValueError("points must be >= 10")
    one_over_n = Fraction(1, n)
    rows = []
    for k in range(1, points):
        p = Fraction(k, points)
        tail = tail_gt_mean(BinomialSpec(n, p)).tail
        if p >= one_over_n:
            segment = "HIGH"
        elif compare_certified(n * p, ">", c_enclosure,
                               max_precision_bits=PRECISION_CAP,
                               start_bits=precision_bits):
            segment = "MID"
        else:
            segment = "LOW"
        rows.append(CurvePoint(p, tail, segment))
    return rows


def format_decimal(x: Fraction, digits: int) -> str:
    """Decimal string with exactly `digits` fractional digits, round-half-even."""
    scale = 10**digits
    q, r = divmod(x.numerator * scale, x.denominator)
    if 2 * r > x.denominator or (2 * r == x.denominator and q % 2 == 1):
        q += 1
    sign = "-" if q < 0 else ""
    whole, frac = divmod(abs(q), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _rational_with_decimal(x: Fraction, digits: int = 15) -> str:
    return f"{fraction_str(x)} ({format_decimal(x, digits)})"


def parse_rational(text: str) -> Fraction:
    """Parse "num/den" or a finite decimal into an exact Fraction."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r}")


def _parse_probability(text: str) -> Fraction:
    p = parse_rational(text)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_tail(args) -> int:
    spec = BinomialSpec(args.n, _parse_probability(args.p))
    record = tail_gt_mean(spec)
    print(f"n = {spec.n}")
    print(f"p = {spec.p}")
    print(f"mean = {_rational_with_decimal(record.mean)}")
    print(f"m = {record.m}")
    print(f"tail = {_rational_with_decimal(record.tail)}")
    return 0


def cmd_check(args) -> int:
    spec = BinomialSpec(args.n, _parse_probability(args.p))
    bits = args.precision_bits or DEFAULT_PRECISION_BITS
    print(f"n = {spec.n}")
    print(f"p = {spec.p}")
    theorem_side = compare_certified(spec.mean, ">=", c_enclosure,
                                     max_precision_bits=PRECISION_CAP,
                                     start_bits=bits)
    if theorem_side:
        print("regime = theorem (certified n*p >= ln(4/3))")
        verdict = check_theorem(spec)
        print(f"hypothesis 1 > p >= ln(4/3)/n: {verdict.hypothesis_holds.text}")
        print(f"tail = {_rational_with_decimal(verdict.tail)}")
        print(f"tail >= 1/4: {verdict.bound_holds.text}")
        print(f"tail > 1/4: {verdict.strict.text}")
        print(f"equality case (n = 2, p = 1/2): "
              f"{'TRUE' if verdict.is_equality_case else 'FALSE'}")
        return 0 if verdict.bound_holds else 1
    print("regime = proposition (certified n*p <= ln(4/3))")
    lhs = 1 - spec.q**spec.n
    print(f"1 - (1-p)^n = {_rational_with_decimal(lhs)}")
    verdict = check_proposition(spec)
    print(f"1 - (1-p)^n >= max(1, b*n)*p: {verdict.text}")
    return 0 if verdict else 1


def cmd_verify(args) -> int:
    n_max = args.nmax or _VERIFY_DEFAULT_NMAX[args.which]
    if args.which == "main":
        report = main_proof_sweep(n_max, grid=args.grid, jobs=args.jobs)
    elif args.which == "appendix":
        bits = args.precision_bits or 200
        report = verify_appendix(n_scan_max=n_max, n_max=n_max, precision_bits=bits)
    elif args.which == "proposition":
        report = ProofReport(f"proposition proof, n <= {n_max}")
        for n in range(1, n_max + 1):
            report.extend(verify_proposition_proof(n, args.grid))
    else:
        report = anderson_samuels_sweep(args.mmax, n_max)
    out = args.out or f"verify_{args.which}.json"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    print(report.to_text())
    if args.which == "appendix":
        conclusion = next(s for s in report.steps if s.step_id == "conclusion")
        print(f"summary: {conclusion.paper_anchor}: {conclusion.verdict}")
    print(f"report written to {out}")
    return 0 if report.passed else 1


def cmd_optimality(args) -> int:
    c1 = parse_rational(args.c1)
    witness = optimality_search(c1, args.nmax)
    print(f"candidate constant c1 = {witness.c1}")
    enc = witness.limit_enclosure
    print(f"limit 1 - e^(-c1) in [{enc.lo}, {enc.hi}]")
    print(f"limit upper bound {format_decimal(enc.hi, 15)} < 1/4: certified")
    if witness.n is not None:
        print(f"counterexample: n = {witness.n}, p = {witness.p}, "
              f"tail = {_rational_with_decimal(witness.tail)} < 1/4")
    else:
        print(f"no finite counterexample up to n = {args.nmax}; "
              f"the limit enclosure certifies failure asymptotically")
    return 0


def cmd_figure(args) -> int:
    bits = args.precision_bits or DEFAULT_PRECISION_BITS
    out = args.out or f"figure_n{args.n}.csv"
    rows = figure_points(args.n, args.points, bits)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write("p,tail,segment\n")
        for row in rows:
            fh.write(f"{format_decimal(row.p, 12)},"
                     f"{format_decimal(row.tail, 12)},{row.segment}\n")
    print(f"wrote {len(rows)} rows to {out}")
    return 0


# ---------------------------------------------------------------------------
# parser / dispatch
# ---------------------------------------------------------------------------

def _add_precision_flag(parser, default=None):
    parser.add_argument("--precision-bits", type=int, default=default,
                        dest="precision_bits", metavar="BITS",
                        help=f"working precision (default {DEFAULT_PRECISION_BITS}, "
                             f"cap {PRECISION_CAP})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binexceed",
        description="Exact verification of P(X > E X) >= 1/4 for binomial X "
                    "with 1 > p >= ln(4/3)/n.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tail = sub.add_parser("tail", help="exact P(X > E X) for one (n, p)")
    p_tail.add_argument("n", type=int)
    p_tail.add_argument("p", help='probability as "num/den" or finite decimal')
    p_tail.set_defaults(func=cmd_tail)

    p_check = sub.add_parser("check", help="decide the applicable bound for (n, p)")
    p_check.add_argument("n", type=int)
    p_check.add_argument("p")
    _add_precision_flag(p_check)
    p_check.set_defaults(func=cmd_check)

    p_verify = sub.add_parser("verify", help="machine-check one of the proofs")
    p_verify.add_argument("which", choices=("main", "appendix", "proposition",
                                            "anderson-samuels"))
    p_verify.add_argument("--nmax", type=int, default=None)
    p_verify.add_argument("--grid", type=int, default=1000,
                          help="p-grid density for sweeps (default 1000)")
    p_verify.add_argument("--mmax", type=int, default=20,
                          help="chain-threshold cap for anderson-samuels")
    p_verify.add_argument("--jobs", type=int, default=None,
                          help="parallel workers (default: cpu count)")
    p_verify.add_argument("--out", default=None, help="report path (JSON)")
    _add_precision_flag(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_opt = sub.add_parser("optimality",
                           help="counterexample search for a smaller constant")
    p_opt.add_argument("c1", help="candidate constant, must be below ln(4/3)")
    p_opt.add_argument("--nmax", type=int, default=100)
    p_opt.set_defaults(func=cmd_optimality)

    p_fig = sub.add_parser("figure", help="emit the tail-vs-p curve as CSV")
    p_fig.add_argument("n", type=int)
    p_fig.add_argument("--points", type=int, default=1000)
    p_fig.add_argument("--out", default=None)
    _add_precision_flag(p_fig)
    p_fig.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    bits = getattr(args, "precision_bits", None)
    if bits is not None and not 8 <= bits <= PRECISION_CAP:
        print(f"error: --precision-bits must lie in [8, {PRECISION_CAP}]",
              file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UndecidedComparisonError as exc:
        print(f"undecided at precision cap: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
