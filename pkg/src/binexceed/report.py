"""Structured proof reports: one record per verified step.

Each step carries an identifier, the mathematical claim it checks, a
three-valued verdict and the witness values that decided it.  Witnesses are
serialized losslessly: rationals as "num/den" strings, enclosures as a
["lo", "hi"] pair of rational strings.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .enclosure import Enclosure

TRUE = "TRUE"
FALSE = "FALSE"
UNDECIDED = "UNDECIDED"


def fraction_str(value: Fraction) -> str:
    """Exact "num/den" rendering, lifting the int->str digit guard if needed.

    Witnesses are exact by contract; grid checks at large n produce rationals
    whose digit counts exceed CPython's default conversion limit.
    """
    digits = max(value.numerator.bit_length(), value.denominator.bit_length())
    digits = digits * 30103 // 100000 + 3
    current = sys.get_int_max_str_digits()
    if 0 < current < digits:
        sys.set_int_max_str_digits(digits + 10)
    return str(value)


def rational_witness(name: str, value) -> dict:
    return {"name": name, "rational": fraction_str(Fraction(value))}


def enclosure_witness(name: str, enc: Enclosure) -> dict:
    return {"name": name, "enclosure": [fraction_str(enc.lo), fraction_str(enc.hi)]}


@dataclass
class ProofStep:
    step_id: str
    paper_anchor: str
    verdict: str
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == TRUE

    def to_dict(self) -> dict:
        return {
            "step_id": self.step_id,
            "paper_anchor": self.paper_anchor,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
        }


@dataclass
class ProofReport:
    title: str
    steps: list = field(default_factory=list)

    def add(self, step_id: str, paper_anchor: str, ok, witnesses=None) -> ProofStep:
        verdict = ok if isinstance(ok, str) else (TRUE if ok else FALSE)
        step = ProofStep(step_id, paper_anchor, verdict, list(witnesses or []))
        self.steps.append(step)
        return step

    def extend(self, other: "ProofReport") -> None:
        self.steps.extend(other.steps)

    @property
    def passed(self) -> bool:
        return all(step.ok for step in self.steps)

    def failed_steps(self) -> list:
        return [s for s in self.steps if not s.ok]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self) -> str:
        lines = [f"report: {self.title}"]
        for s in self.steps:
            lines.append(f"  [{s.verdict:>9}] {s.step_id}: {s.paper_anchor}")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'} "
                     f"({len(self.steps)} steps)")
        return "\n".join(lines)
