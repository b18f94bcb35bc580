"""Exact binomial pmf and tail probabilities for rational success probability.

Everything here is computed in exact rational arithmetic; there is no
floating point anywhere.  The central quantity is the strict exceedance
probability P(X > E X) = P(X >= floor(np) + 1), returned as an exact
fraction together with the threshold that realizes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .enclosure import Verdict, as_fraction


@dataclass(frozen=True)
class BinomialSpec:
    """Number of trials n >= 1 and exact rational success probability p in [0, 1]."""

    n: int
    p: Fraction

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "p", as_fraction(self.p))
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    @property
    def mean(self) -> Fraction:
        return self.n * self.p


@dataclass(frozen=True)
class ExceedanceRecord:
    """Exact record of P(X > E X) for one (n, p).

    mean = n*p, m = floor(n*p) + 1 and tail = P(X >= m), all exact; the
    floor is taken by integer division of numerators, never through a
    real-valued intermediate.
    """

    spec: BinomialSpec
    mean: Fraction
    m: int
    tail: Fraction


def pmf(spec: BinomialSpec, k: int) -> Fraction:
    """P(X = k) = C(n,k) p^k (1-p)^(n-k), exact."""
    n = spec.n
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    a = spec.p.numerator
    b = spec.p.denominator
    return Fraction(math.comb(n, k) * a**k * (b - a) ** (n - k), b**n)


def survival(spec: BinomialSpec, k: int) -> Fraction:
    """P(X >= k), exact, for 0 <= k <= n+1.

    Sums whichever of {k..n} and {0..k-1} has fewer terms and complements;
    binomial coefficients are updated incrementally with big integers.
    """
    n = spec.n
    if not 0 <= k <= n + 1:
        raise ValueError(f"k must lie in [0, {n + 1}]")
    if k == 0:
        return Fraction(1)
    if k == n + 1:
        return Fraction(0)
    a = spec.p.numerator
    b = spec.p.denominator
    if a == 0:
        return Fraction(0)
    if a == b:
        return Fraction(1)
    qa = b - a
    if n - k + 1 <= k:
        total, coef, power, j = 0, math.comb(n, k), a**k * qa ** (n - k), k
        while True:
            total += coef * power
            if j == n:
                break
            coef = coef * (n - j) // (j + 1)
            power = power * a // qa
            j += 1
        return Fraction(total, b**n)
    # complement of P(X <= k-1)
    total, coef, power, j = 0, 1, qa**n, 0
    while True:
        total += coef * power
        if j == k - 1:
            break
        coef = coef * (n - j) // (j + 1)
        power = power * a // qa
        j += 1
    return Fraction(b**n - total, b**n)


def tail_gt_mean(spec: BinomialSpec) -> ExceedanceRecord:
    """Exact P(X > E X) together with mean and threshold m = floor(np) + 1.

    For p = 1 the mean is n, m = n + 1 and the tail is 0.
    """
    mean = spec.mean
    m = mean.numerator // mean.denominator + 1
    return ExceedanceRecord(spec, mean, m, survival(spec, m))


def stochastic_dominance_check(n: int, p1, p2, k: int) -> Verdict:
    """TRUE iff P(X_{n,p1} >= k) <= P(X_{n,p2} >= k); exact comparison.

    With p1 <= p2 this is the stochastic monotonicity of the binomial
    family in p, returned as a Verdict so tests can assert it wholesale.
    """
    p1 = as_fraction(p1)
    p2 = as_fraction(p2)
    if not 0 <= p1 <= p2 <= 1:
        raise ValueError("need 0 <= p1 <= p2 <= 1")
    s1 = survival(BinomialSpec(n, p1), k)
    s2 = survival(BinomialSpec(n, p2), k)
    return Verdict(s1 <= s2, witness=s2 - s1)
