"""Certified interval enclosures over exact rational arithmetic.

Every real constant that is not a rational number (ln(4/3), e^x, square
roots, ...) is represented by an interval [lo, hi] with exact `Fraction`
endpoints that provably contains the true value.  Comparisons against such
constants are decided only when the intervals separate; otherwise precision
is doubled up to a hard cap, and hitting the cap raises instead of guessing.

Series evaluation keeps every partial sum as a pair of dyadic rationals
(integer mantissa over a power of two), with floor rounding on the lower
track and ceiling rounding on the upper track, so the final interval is a
rigorous enclosure by construction:

* ln(x) = e*ln(2) + 2*atanh(t) after reducing x = 2^e * m with m in
  [2/3, 4/3) and t = (m-1)/(m+1), |t| <= 1/5; atanh via its odd power
  series with the geometric tail bounded explicitly.
* e^x via Taylor series on y = x/2^s, |y| <= 1/2, followed by s interval
  squarings.
* sqrt(x) via integer square roots of scaled numerators; degenerates to an
  exact point when x is the square of a rational.

All enclosure constructors return intervals of width exactly 2^-precision
(times a power-of-two scale for exp of large arguments), so the width
halves each time `precision_bits` increases by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

DEFAULT_PRECISION_BITS = 64
PRECISION_CAP = 4096
_MIN_PRECISION_BITS = 8


class UndecidedComparisonError(ArithmeticError):
    """A certified comparison could not be decided at the precision cap."""


class PreconditionError(ValueError):
    """A documented hypothesis of an operation is violated by the inputs."""


Rational = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Coerce to Fraction, rejecting floats (binary floats are never exact here)."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or int")
    return Fraction(value)


def _ceil_div(a: int, b: int) -> int:
    # ceiling of a/b for b > 0, any sign of a
    return -((-a) // b)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] with exact rational endpoints.

    Invariant: lo <= hi, and for a constructed constant the true real value
    lies inside.  Arithmetic on enclosures uses exact rational endpoint
    arithmetic, so no additional rounding error is ever introduced.
    """

    lo: Fraction
    hi: Fraction
    precision_bits: int = DEFAULT_PRECISION_BITS

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"invalid interval: lo={self.lo} > hi={self.hi}")
        if self.precision_bits < 1:
            raise ValueError("precision_bits must be positive")

    @classmethod
    def from_rational(cls, value, precision_bits: int = DEFAULT_PRECISION_BITS) -> "Enclosure":
        v = as_fraction(value)
        return cls(v, v, precision_bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        v = as_fraction(value)
        return self.lo <= v <= self.hi

    def encloses(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo, self.precision_bits)

    def _coerce(self, other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.from_rational(other, self.precision_bits)

    def __add__(self, other) -> "Enclosure":
        o = self._coerce(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi,
                         min(self.precision_bits, o.precision_bits))

    __radd__ = __add__

    def __sub__(self, other) -> "Enclosure":
        o = self._coerce(other)
        return Enclosure(self.lo - o.hi, self.hi - o.lo,
                         min(self.precision_bits, o.precision_bits))

    def __rsub__(self, other) -> "Enclosure":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Enclosure":
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure(min(products), max(products),
                         min(self.precision_bits, o.precision_bits))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("division by an interval containing zero")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Enclosure(min(quotients), max(quotients),
                         min(self.precision_bits, o.precision_bits))

    def __rtruediv__(self, other) -> "Enclosure":
        return self._coerce(other) / self

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a rigorously decided comparison.

    Only ever produced when the decision is certain: either both operands
    were exact rationals, or the enclosures separated.  `witness` records
    the quantity whose sign decided the comparison.
    """

    value: bool
    witness: Union[Enclosure, Fraction, None] = None

    def __bool__(self) -> bool:
        return self.value

    @property
    def text(self) -> str:
        return "TRUE" if self.value else "FALSE"


# ---------------------------------------------------------------------------
# Dyadic series kernels.  Mantissa pairs (lo, hi) at scale 2^-W: the lower
# track rounds toward -inf, the upper toward +inf, so [lo/2^W, hi/2^W]
# always contains the exact partial sum.
# ---------------------------------------------------------------------------

def _atanh_dyadic(num: int, den: int, target_bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of atanh(num/den) for 0 <= num/den <= 1/3, width <= 2^-target_bits."""
    if num == 0:
        return Fraction(0), Fraction(0)
    W = target_bits + 24
    one = 1 << W
    t2_num, t2_den = num * num, den * den
    t2_hi = _ceil_div(t2_num << W, t2_den)          # mantissa of upper bound on t^2
    t2_lo = (t2_num << W) // t2_den
    pw_lo = (num << W) // den                        # enclosure of t^(2k+1), k = 0
    pw_hi = _ceil_div(num << W, den)
    s_lo = 0
    s_hi = 0
    k = 0
    rem_stop = 1 << (W - target_bits - 4)
    while True:
        d = 2 * k + 1
        s_lo += pw_lo // d
        s_hi += _ceil_div(pw_hi, d)
        pw_lo = (pw_lo * t2_lo) >> W
        pw_hi = _ceil_div(pw_hi * t2_hi, one)
        k += 1
        # tail <= t^(2k+1) / ((2k+1)(1-t^2)) <= 2 * t^(2k+1) / (2k+1) for t^2 <= 1/2
        rem = _ceil_div(2 * pw_hi, 2 * k + 1)
        if rem <= rem_stop:
            break
    lo = Fraction(s_lo, one)
    hi = Fraction(s_hi + rem, one)
    assert hi - lo <= Fraction(1, 1 << target_bits)
    return lo, hi


@lru_cache(maxsize=None)
def _ln2_tight(target_bits: int) -> tuple[Fraction, Fraction]:
    # ln 2 = 2 * atanh(1/3)
    lo, hi = _atanh_dyadic(1, 3, target_bits + 1)
    return 2 * lo, 2 * hi


def _exp_taylor_dyadic(num: int, den: int, W: int) -> tuple[int, int]:
    """Mantissa enclosure of e^(num/den) at scale 2^-W, for |num/den| <= 1/2."""
    s_lo = s_hi = 1 << W                             # j = 0 term
    t_lo = t_hi = 1 << W
    j = 0
    while True:
        j += 1
        d = den * j
        if num >= 0:
            t_lo, t_hi = (t_lo * num) // d, _ceil_div(t_hi * num, d)
        else:
            t_lo, t_hi = (t_hi * num) // d, _ceil_div(t_lo * num, d)
        s_lo += t_lo
        s_hi += t_hi
        bound = max(abs(t_lo), abs(t_hi))
        if 2 * bound + 1 < 8:                       # tail <= 2*|next term|, down to ulp level
            rem = 2 * bound + 1
            return s_lo - rem, s_hi + rem


def _grid_normalize(lo: Fraction, hi: Fraction, precision_bits: int,
                    scale_exp: int = 0) -> Enclosure:
    """Pad a tight enclosure to width exactly 2^(scale_exp - precision_bits).

    Requires hi - lo <= 2^(scale_exp - precision_bits - 1); the midpoint is
    snapped to a dyadic grid so rebuilding at higher precision always yields
    a strictly narrower interval.
    """
    quantum = Fraction(1 << max(0, scale_exp), 1 << (precision_bits + 3))
    assert hi - lo <= 4 * quantum
    mid = ((lo + hi) / 2 / quantum).__floor__() * quantum
    half = 4 * quantum
    return Enclosure(mid - half, mid + half, precision_bits)


def _check_precision(precision_bits: int) -> None:
    # the PRECISION_CAP is enforced by compare_certified's refinement loop;
    # constructors only validate the documented minimum
    if precision_bits < _MIN_PRECISION_BITS:
        raise ValueError(f"precision_bits must be >= {_MIN_PRECISION_BITS}")


# ---------------------------------------------------------------------------
# Enclosure constructors
# ---------------------------------------------------------------------------

def ln_enclosure(x, precision_bits: int = DEFAULT_PRECISION_BITS) -> Enclosure:
    """Certified enclosure of ln(x) for rational x > 0, width exactly 2^-precision_bits."""
    _check_precision(precision_bits)
    x = as_fraction(x)
    if x <= 0:
        raise ValueError("ln requires x > 0")
    # reduce x = 2^e * m with m in [2/3, 4/3)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** e
    while m < Fraction(2, 3):
        e -= 1
        m *= 2
    while m >= Fraction(4, 3):
        e += 1
        m /= 2
    t = (m - 1) / (m + 1)                            # |t| <= 1/5
    part_bits = precision_bits + 8 + abs(e).bit_length()
    at_lo, at_hi = _atanh_dyadic(abs(t.numerator), t.denominator, part_bits)
    if t < 0:
        at_lo, at_hi = -at_hi, -at_lo
    lo = 2 * at_lo
    hi = 2 * at_hi
    if e != 0:
        l2_lo, l2_hi = _ln2_tight(part_bits)
        if e > 0:
            lo, hi = lo + e * l2_lo, hi + e * l2_hi
        else:
            lo, hi = lo + e * l2_hi, hi + e * l2_lo
    return _grid_normalize(lo, hi, precision_bits)


def exp_enclosure(x, precision_bits: int = DEFAULT_PRECISION_BITS) -> Enclosure:
    """Certified enclosure of e^x for rational x.

    Width is exactly 2^(k - precision_bits) where 2^k is the largest power
    of two not exceeding max(1, e^x), i.e. the usual relative-style bound.
    """
    _check_precision(precision_bits)
    x = as_fraction(x)
    # power-of-two scale 2^k <= max(1, e^x)
    if x <= 0:
        k = 0
    else:
        _, l2_hi = _ln2_tight(16)
        k = int(x / l2_hi)                          # floor; k*ln2 <= x, so 2^k <= e^x
    # halve the argument until |y| <= 1/2
    s = 0
    y = x
    while abs(y) > Fraction(1, 2):
        y /= 2
        s += 1
    W = precision_bits + k + 2 * s + 32
    lo_m, hi_m = _exp_taylor_dyadic(y.numerator, y.denominator, W)
    for _ in range(s):
        lo_m, hi_m = (lo_m * lo_m) >> W, _ceil_div(hi_m * hi_m, 1 << W)
    scale = Fraction(1, 1 << W)
    return _grid_normalize(lo_m * scale, hi_m * scale, precision_bits, scale_exp=k)


def sqrt_enclosure(x, precision_bits: int = DEFAULT_PRECISION_BITS) -> Enclosure:
    """Certified enclosure of sqrt(x) for rational x >= 0.

    Exact point interval when x is the square of a rational; otherwise
    width exactly 2^-precision_bits.
    """
    _check_precision(precision_bits)
    x = as_fraction(x)
    if x < 0:
        raise ValueError("sqrt requires x >= 0")
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        r = Fraction(rn, rd)
        return Enclosure(r, r, precision_bits)
    W = precision_bits
    scaled = (x.numerator << (2 * W)) // x.denominator
    root = math.isqrt(scaled)
    return Enclosure(Fraction(root, 1 << W), Fraction(root + 1, 1 << W), precision_bits)


def c_enclosure(precision_bits: int = DEFAULT_PRECISION_BITS) -> Enclosure:
    """Enclosure of the threshold constant ln(4/3) = 0.28768..."""
    return _c_cached(precision_bits)


@lru_cache(maxsize=None)
def _c_cached(precision_bits: int) -> Enclosure:
    return ln_enclosure(Fraction(4, 3), precision_bits)


def b_enclosure(precision_bits: int = DEFAULT_PRECISION_BITS) -> Enclosure:
    """Enclosure of (1 - e^-ln(4/3)) / ln(4/3) = (1/4) / ln(4/3) = 0.86901..."""
    return _b_cached(precision_bits)


@lru_cache(maxsize=None)
def _b_cached(precision_bits: int) -> Enclosure:
    _check_precision(precision_bits)
    c = c_enclosure(precision_bits + 8)
    lo = Fraction(1, 4) / c.hi
    hi = Fraction(1, 4) / c.lo
    return _grid_normalize(lo, hi, precision_bits)


# ---------------------------------------------------------------------------
# Certified comparison
# ---------------------------------------------------------------------------

Refinable = Callable[[int], Enclosure]
Operand = Union[int, Fraction, Enclosure, Refinable]

_RELATIONS = ("<", "<=", ">", ">=", "=")


def _normalize_relation(relation: str) -> str:
    rel = {"==": "=", "≤": "<=", "≥": ">="}.get(relation, relation)
    if rel not in _RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    return rel


def _decide(rel: str, d: Enclosure) -> Union[bool, None]:
    # d encloses (a - b); None means the interval does not separate yet
    if rel == "<":
        if d.hi < 0:
            return True
        if d.lo >= 0:
            return False
    elif rel == "<=":
        if d.hi <= 0:
            return True
        if d.lo > 0:
            return False
    elif rel == ">":
        if d.lo > 0:
            return True
        if d.hi <= 0:
            return False
    elif rel == ">=":
        if d.lo >= 0:
            return True
        if d.hi < 0:
            return False
    else:  # "="
        if d.is_point and d.lo == 0:
            return True
        if d.lo > 0 or d.hi < 0:
            return False
    return None


def compare_certified(a: Operand, relation: str, b: Operand,
                      max_precision_bits: int = PRECISION_CAP,
                      start_bits: int = DEFAULT_PRECISION_BITS) -> Verdict:
    """Rigorously decide `a relation b`.

    Operands may be exact rationals, fixed enclosures, or callables
    precision_bits -> Enclosure (e.g. `c_enclosure`), which are refined by
    doubling the precision until the intervals separate.  Raises
    UndecidedComparisonError when the cap is reached (or when fixed
    intervals overlap and nothing can be refined).
    """
    rel = _normalize_relation(relation)
    exact_a = not isinstance(a, Enclosure) and not callable(a)
    exact_b = not isinstance(b, Enclosure) and not callable(b)
    if exact_a and exact_b:
        diff = as_fraction(a) - as_fraction(b)
        result = {"<": diff < 0, "<=": diff <= 0, ">": diff > 0,
                  ">=": diff >= 0, "=": diff == 0}[rel]
        return Verdict(result, witness=diff)

    def evaluate(op: Operand, bits: int) -> Enclosure:
        if callable(op):
            return op(bits)
        if isinstance(op, Enclosure):
            return op
        return Enclosure.from_rational(op, bits)

    if max_precision_bits < start_bits:
        raise ValueError("max_precision_bits must be >= start_bits")
    refinable = callable(a) or callable(b)
    bits = max(start_bits, _MIN_PRECISION_BITS)
    while True:
        d = evaluate(a, bits) - evaluate(b, bits)
        outcome = _decide(rel, d)
        if outcome is not None:
            return Verdict(outcome, witness=d)
        if not refinable:
            raise UndecidedComparisonError(
                f"intervals overlap and neither operand is refinable: {d}")
        if bits >= max_precision_bits:
            raise UndecidedComparisonError(
                f"undecided at max precision {max_precision_bits}: {d}")
        bits = min(2 * bits, max_precision_bits)
