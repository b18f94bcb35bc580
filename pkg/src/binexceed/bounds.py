"""Deciders for the two lower bounds on P(X > E X).

* Theorem regime 1 > p >= ln(4/3)/n: the tail is at least 1/4, strictly
  except at (n, p) = (2, 1/2).
* Proposition regime 0 <= p <= ln(4/3)/n: 1 - (1-p)^n >= max(1, b*n) * p
  with b = (1/4)/ln(4/3).

The hypothesis boundary p = ln(4/3)/n is irrational, so for rational p the
certified comparison always terminates given enough precision; the
refinement cap is a safety valve, never a silent guess.  `optimality_search`
exhibits counterexamples for any smaller threshold constant, plus the
certified limit 1 - e^(-c1) < 1/4.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .enclosure import (
    DEFAULT_PRECISION_BITS,
    PRECISION_CAP,
    Enclosure,
    PreconditionError,
    UndecidedComparisonError,
    Verdict,
    as_fraction,
    b_enclosure,
    c_enclosure,
    compare_certified,
    exp_enclosure,
)
from .binom import BinomialSpec, tail_gt_mean

ONE_QUARTER = Fraction(1, 4)


@dataclass(frozen=True)
class TheoremVerdict:
    """Certified verdicts for one (n, p) against the 1/4 tail bound."""

    spec: BinomialSpec
    hypothesis_holds: Verdict      # 1 > p >= c/n ?
    bound_holds: Verdict           # tail >= 1/4 ?
    strict: Verdict                # tail > 1/4 ?
    is_equality_case: bool         # n = 2 and p = 1/2
    tail: Fraction


@dataclass(frozen=True)
class OptimalityWitness:
    """Evidence that a candidate constant c1 < ln(4/3) fails.

    Either a finite counterexample (smallest n with tail < 1/4 at p = c1/n,
    in which case n, p, tail are set) or the limit-only certificate; the
    enclosure of 1 - e^(-c1) with hi < 1/4 is always attached.
    """

    c1: Fraction
    n: Optional[int]
    p: Optional[Fraction]
    tail: Optional[Fraction]
    limit_enclosure: Enclosure


def check_theorem(spec: BinomialSpec,
                  max_precision_bits: int = PRECISION_CAP) -> TheoremVerdict:
    """Decide hypothesis and bound for one (n, p); all tail comparisons exact."""
    if spec.p >= 1:
        hypothesis = Verdict(False, witness=spec.p - 1)
    else:
        hypothesis = compare_certified(spec.mean, ">=", c_enclosure,
                                       max_precision_bits=max_precision_bits)
    tail = tail_gt_mean(spec).tail
    return TheoremVerdict(
        spec=spec,
        hypothesis_holds=hypothesis,
        bound_holds=Verdict(tail >= ONE_QUARTER, witness=tail - ONE_QUARTER),
        strict=Verdict(tail > ONE_QUARTER, witness=tail - ONE_QUARTER),
        is_equality_case=(spec.n == 2 and spec.p == Fraction(1, 2)),
        tail=tail,
    )


def check_proposition(spec: BinomialSpec,
                      max_precision_bits: int = PRECISION_CAP) -> Verdict:
    """Decide 1 - (1-p)^n >= max(1, b*n) * p in the small-p regime.

    Requires certified p <= c/n.  The left side is exact; for n >= 2 the
    right side goes through the enclosure of b with refinement on overlap.
    """
    n, p = spec.n, spec.p
    if not compare_certified(spec.mean, "<=", c_enclosure,
                             max_precision_bits=max_precision_bits):
        raise PreconditionError(f"need p <= c/n; got n*p = {spec.mean}")
    lhs = 1 - spec.q**n
    if n == 1:
        # max(1, b) = 1 exactly: both sides equal p
        return Verdict(lhs >= p, witness=lhs - p)
    # b*n > 1 for n >= 2 (b = 0.869...), so the active branch is b*n*p
    def rhs(bits: int) -> Enclosure:
        return b_enclosure(bits) * spec.mean
    return compare_certified(lhs, ">=", rhs,
                             max_precision_bits=max_precision_bits)


def optimality_search(c1, n_max: int,
                      max_precision_bits: int = PRECISION_CAP) -> OptimalityWitness:
    """Smallest n <= n_max with tail < 1/4 at p = c1/n, for a candidate c1 < c.

    Scans n upward (small witnesses are cheap and persuasive); always
    attaches the certified enclosure of the limit 1 - e^(-c1), whose upper
    endpoint below 1/4 proves failure even when no finite witness exists.
    """
    c1 = as_fraction(c1)
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    if not compare_certified(c1, "<", c_enclosure,
                             max_precision_bits=max_precision_bits):
        raise PreconditionError(f"candidate constant {c1} is not below ln(4/3)")
    if c1 <= 0:
        raise PreconditionError("candidate constant must be positive")

    bits = DEFAULT_PRECISION_BITS
    limit_enc = 1 - exp_enclosure(-c1, bits)
    while limit_enc.hi >= ONE_QUARTER:
        # c1 < c certified, so 1 - e^(-c1) < 1/4; refine until that shows
        if bits >= max_precision_bits:
            raise UndecidedComparisonError(
                f"limit 1 - e^(-{c1}) not separated from 1/4 at cap")
        bits = min(2 * bits, max_precision_bits)
        limit_enc = 1 - exp_enclosure(-c1, bits)

    for n in range(1, n_max + 1):
        record = tail_gt_mean(BinomialSpec(n, c1 / n))
        if record.tail < ONE_QUARTER:
            return OptimalityWitness(c1=c1, n=n, p=c1 / n, tail=record.tail,
                                     limit_enclosure=limit_enc)
    return OptimalityWitness(c1=c1, n=None, p=None, tail=None,
                             limit_enclosure=limit_enc)


# ---------------------------------------------------------------------------
# Grid sweeps.  Cells are independent, so they parallelize over n; the
# threshold constant's enclosure is computed once and shared.
# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    cells: int
    violations: list          # (n, p, value) triples that failed
    equalities: list          # (n, p) where the bound is attained exactly


def _certified_np_vs_c(np_value: Fraction, c_lo: Fraction, c_hi: Fraction) -> Optional[bool]:
    """True if np > c certified, False if np < c certified, None if undecided."""
    if np_value >= c_hi:
        return True
    if np_value <= c_lo:
        return False
    return None


def _theorem_sweep_one_n(args) -> tuple[int, list, list]:
    n, grid, c_lo, c_hi = args
    cells = 0
    violations = []
    equalities = []
    for k in range(1, grid):
        np_value = Fraction(n * k, grid)
        side = _certified_np_vs_c(np_value, c_lo, c_hi)
        if side is None:
            side = bool(compare_certified(np_value, ">=", c_enclosure))
        if not side:
            continue
        cells += 1
        p = Fraction(k, grid)
        tail = tail_gt_mean(BinomialSpec(n, p)).tail
        if tail < ONE_QUARTER:
            violations.append((n, p, tail))
        elif tail == ONE_QUARTER:
            equalities.append((n, p))
    return cells, violations, equalities


def theorem_sweep(n_max: int, grid: int = 1000, jobs: Optional[int] = None,
                  precision_bits: int = 128) -> SweepResult:
    """Exact tail >= 1/4 over all n <= n_max and grid rationals p with p >= c/n."""
    c = c_enclosure(precision_bits)
    tasks = [(n, grid, c.lo, c.hi) for n in range(1, n_max + 1)]
    result = SweepResult(0, [], [])
    for cells, violations, equalities in _run_tasks(_theorem_sweep_one_n, tasks, jobs):
        result.cells += cells
        result.violations.extend(violations)
        result.equalities.extend(equalities)
    return result


def _proposition_sweep_one_n(args) -> tuple[int, list, list]:
    n, grid, k_max, b_lo, b_hi = args
    cells = 0
    violations = []
    for k in range(1, k_max + 1):
        p = Fraction(k, grid * n)
        lhs = 1 - (1 - p) ** n
        cells += 1
        if n == 1:
            # max(1, b) = 1: the two sides are identically equal to p
            if lhs < p:
                violations.append((n, p, lhs))
            continue
        if lhs >= b_hi * n * p:
            continue
        if lhs < b_lo * n * p:
            violations.append((n, p, lhs))
            continue
        # enclosure overlaps the exact value: refine up to 256 bits
        if not bool(check_proposition(BinomialSpec(n, p), max_precision_bits=256)):
            violations.append((n, p, lhs))
    return cells, violations, []


def proposition_sweep(n_max: int, grid: int = 1000, jobs: Optional[int] = None,
                      precision_bits: int = 64) -> SweepResult:
    """Exact-vs-enclosure check of the proposition over p = k/(grid*n), p <= c/n."""
    c = c_enclosure(max(precision_bits, 128))
    b = b_enclosure(precision_bits)
    # p <= c/n iff k/grid <= c, the same k threshold for every n
    k_max = int(c.lo * grid)
    tasks = [(n, grid, k_max, b.lo, b.hi) for n in range(1, n_max + 1)]
    result = SweepResult(0, [], [])
    for cells, violations, equalities in _run_tasks(_proposition_sweep_one_n, tasks, jobs):
        result.cells += cells
        result.violations.extend(violations)
        result.equalities.extend(equalities)
    return result


def _run_tasks(fn, tasks, jobs: Optional[int]):
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
