"""Symbolic edge-probability families p(n).

The interesting parameter choices are sequences, not single numbers: a
polynomial decay n^-beta, an exponential decay c*2^(-n/k)/n, the critical
window nu/(n*2^n), or families below it.  A ProbabilityFamily records the
functional form so regime classification can see it, and evaluates to a
literal p at any given n.

Accepted syntax (whitespace ignored, '*' optional around '/'):

    0.05                  literal
    n^-1.5,  0.5*n^-2     polynomial
    2^-n/2 / n            exponential, resonant when the divisor is an integer
    2^(-0.4n)/n           exponential with explicit rate
    1/(n*2^n)             critical window, coefficient is nu
    1/(n*2^n*log n)       below the critical window (natural log)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

_NUM = r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"


class FamilyKind(Enum):
    LITERAL = "literal"
    POWER = "power"
    EXP2 = "exp2"
    CRITICAL = "critical"
    SUBCRITICAL = "subcritical"


@dataclass(frozen=True)
class ProbabilityFamily:
    kind: FamilyKind
    coefficient: float
    # POWER: p = c * n**-exponent;  EXP2: p = c * 2**(-exponent * n) / n
    exponent: float | None = None
    source: str = ""

    def evaluate(self, n: int) -> float:
        if n < 1:
            raise DomainError(f"n must be positive, got {n}")
        c = self.coefficient
        if self.kind is FamilyKind.LITERAL:
            p = c
        elif self.kind is FamilyKind.POWER:
            p = c * float(n) ** (-self.exponent)
        elif self.kind is FamilyKind.EXP2:
            p = c * 2.0 ** (-self.exponent * n) / n
        elif self.kind is FamilyKind.CRITICAL:
            p = c / (n * 2.0**n)
        elif self.kind is FamilyKind.SUBCRITICAL:
            if n < 2:
                raise DomainError("subcritical family needs n >= 2 (log n > 0)")
            p = c / (n * 2.0**n * math.log(n))
        else:  # pragma: no cover
            raise AssertionError(self.kind)
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"family {self.describe()} evaluates to p={p} outside [0, 1] at n={n}")
        return p

    def resonance(self) -> int | None:
        """Integer k >= 2 when the family is proportional to 2^(-n/k)/n, else None."""
        if self.kind is not FamilyKind.EXP2:
            return None
        k = 1.0 / self.exponent
        rounded = round(k)
        if rounded >= 2 and abs(k - rounded) <= 1e-9 * max(1.0, abs(k)):
            return int(rounded)
        return None

    def describe(self) -> str:
        if self.source:
            return self.source
        c = self.coefficient
        if self.kind is FamilyKind.LITERAL:
            return repr(c)
        if self.kind is FamilyKind.POWER:
            return f"{c}*n^-{self.exponent}"
        if self.kind is FamilyKind.EXP2:
            return f"{c}*2^(-{self.exponent}*n)/n"
        if self.kind is FamilyKind.CRITICAL:
            return f"{c}/(n*2^n)"
        return f"{c}/(n*2^n*log n)"


def literal_family(p: float) -> ProbabilityFamily:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must be in [0, 1], got {p}")
    return ProbabilityFamily(FamilyKind.LITERAL, float(p), source=repr(float(p)))


def parse_family(text: str) -> ProbabilityFamily:
    """Parse a family expression; see module docstring for the grammar."""
    src = text.strip()
    s = re.sub(r"\s+", "", src)
    if not s:
        raise DomainError("empty probability family")

    try:
        return literal_family(float(s))
    except (ValueError, DomainError) as exc:
        if isinstance(exc, DomainError):
            raise

    coef = 1.0
    m = re.match(rf"^({_NUM})\*(.+)$", s)
    body = s
    if m:
        coef = float(m.group(1))
        body = m.group(2)

    # polynomial: n^-beta (beta > 0 keeps p <= c)
    m = re.fullmatch(r"n\^\(?-(" + _NUM + r")\)?", body)
    if m:
        return ProbabilityFamily(FamilyKind.POWER, coef, float(m.group(1)), source=src)

    # exponential, divisor form: 2^-n/k / n  or  2^(-n/k)/n
    m = re.fullmatch(r"2\^\(?-n/(" + _NUM + r")\)?/n", body)
    if m:
        k = float(m.group(1))
        if k <= 0:
            raise DomainError(f"divisor must be positive in {src!r}")
        return _exp2(coef, 1.0 / k, src)

    # exponential, rate form: 2^(-0.4n)/n or 2^-0.4n/n (also 2^(-0.4*n)/n)
    m = re.fullmatch(r"2\^\(?-(" + _NUM + r")\*?n\)?/n", body)
    if m:
        return _exp2(coef, float(m.group(1)), src)

    # critical window: c/(n*2^n); leading coefficient written without '*'
    m = re.fullmatch(rf"(?:({_NUM}))?/\(n\*2\^n\)", s)
    if m:
        c = float(m.group(1)) if m.group(1) else 1.0
        return ProbabilityFamily(FamilyKind.CRITICAL, c, source=src)

    # below the window: c/(n*2^n*log n)
    m = re.fullmatch(rf"(?:({_NUM}))?/\(n\*2\^n\*log\(?n\)?\)", s)
    if m:
        c = float(m.group(1)) if m.group(1) else 1.0
        return ProbabilityFamily(FamilyKind.SUBCRITICAL, c, source=src)

    raise DomainError(f"unrecognized probability family: {text!r}")


def _exp2(coef: float, rate: float, src: str) -> ProbabilityFamily:
    if rate <= 0:
        raise DomainError(f"exponential rate must be positive in {src!r}")
    if abs(rate - 1.0) <= 1e-12:
        # c*2^-n/n is the critical window with nu = c
        return ProbabilityFamily(FamilyKind.CRITICAL, coef, source=src)
    return ProbabilityFamily(FamilyKind.EXP2, coef, rate, source=src)


def resolve_family(spec: "str | float | ProbabilityFamily") -> ProbabilityFamily:
    if isinstance(spec, ProbabilityFamily):
        return spec
    if isinstance(spec, str):
        return parse_family(spec)
    return literal_family(float(spec))
