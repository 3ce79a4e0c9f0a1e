"""
Integrand DSL and normalization to the canonical sin/cos/cos(2x) exponent triple.

Grammar (whitespace insensitive, case sensitive)::

    integral := "int" "[" "0" "," bound "]" product "dx"
    bound    := "pi/2" | "pi/4"
    product  := ("1" | term) { ("*" | "/") term }
    term     := factor [ "^" "(" rational ")" | "^" integer ] | "sqrt" "(" factor ")"
    factor   := "sin(x)" | "cos(x)" | "tan(x)" | "cot(x)" | "sec(x)" | "csc(x)" | "cos(2x)"
    rational := integer [ "/" positive-integer ]
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import IntegrandDomainError, ParseError


class Upper(enum.Enum):
    QUARTER_PI = "pi/4"
    HALF_PI = "pi/2"

    @property
    def value_float(self) -> float:
        return math.pi / 4 if self is Upper.QUARTER_PI else math.pi / 2


class Base(enum.Enum):
    SIN = "sin(x)"
    COS = "cos(x)"
    TAN = "tan(x)"
    COT = "cot(x)"
    SEC = "sec(x)"
    CSC = "csc(x)"
    COS2X = "cos(2x)"


class Endpoint(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class TrigIntegrand:
    """sin^alpha(x) cos^beta_exp(x) cos^gamma_exp(2x) on [0, upper]."""

    alpha: Fraction
    beta_exp: Fraction
    gamma_exp: Fraction
    upper: Upper

    def __post_init__(self):
        for name in ("alpha", "beta_exp", "gamma_exp"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.upper is Upper.HALF_PI and self.gamma_exp != 0:
            raise IntegrandDomainError("cos(2x) on half-pi interval")

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class ConvergenceVerdict:
    convergent: bool
    offending_endpoint: Optional[Endpoint]
    reason: str


# rewrite of each base into (sin exponent, cos exponent, cos2x exponent) per unit power
_NORMAL = {
    Base.SIN: (1, 0, 0),
    Base.COS: (0, 1, 0),
    Base.TAN: (1, -1, 0),
    Base.COT: (-1, 1, 0),
    Base.SEC: (0, -1, 0),
    Base.CSC: (-1, 0, 0),
    Base.COS2X: (0, 0, 1),
}


def normalize(factors: Iterable[tuple[Base, Fraction]]) -> tuple[Fraction, Fraction, Fraction]:
    """Collapse a list of ``(base, exponent)`` pairs into ``(alpha, beta, gamma)``."""
    acc = [Fraction(0), Fraction(0), Fraction(0)]
    for base, exponent in factors:
        e = Fraction(exponent)
        for i, unit in enumerate(_NORMAL[base]):
            if unit:
                acc[i] += unit * e
    return acc[0], acc[1], acc[2]


def convergence_check(ti: TrigIntegrand) -> ConvergenceVerdict:
    if ti.alpha <= -1:
        return ConvergenceVerdict(
            False, Endpoint.LOWER,
            f"sin(x)^({ti.alpha}) is not integrable at 0: exponent must exceed -1",
        )
    if ti.upper is Upper.HALF_PI and ti.beta_exp <= -1:
        return ConvergenceVerdict(
            False, Endpoint.UPPER,
            f"cos(x)^({ti.beta_exp}) is not integrable at pi/2: exponent must exceed -1",
        )
    if ti.upper is Upper.QUARTER_PI and ti.gamma_exp <= -1:
        return ConvergenceVerdict(
            False, Endpoint.UPPER,
            f"cos(2x)^({ti.gamma_exp}) is not integrable at pi/4: exponent must exceed -1",
        )
    return ConvergenceVerdict(True, None, "all endpoint exponents exceed -1")


def _exponent_text(e: Fraction) -> str:
    if e == 1:
        return ""
    if e.denominator == 1 and e > 0:
        return f"^{e.numerator}"
    return f"^({e.numerator}/{e.denominator})" if e.denominator != 1 else f"^({e.numerator})"


def render(ti: TrigIntegrand) -> str:
    """Canonical DSL text; ``parse(render(ti)) == ti``."""
    parts = []
    for base, e in ((Base.SIN, ti.alpha), (Base.COS, ti.beta_exp), (Base.COS2X, ti.gamma_exp)):
        if e != 0:
            parts.append(base.value + _exponent_text(e))
    body = " * ".join(parts) if parts else "1"
    return f"int[0,{ti.upper.value}] {body} dx"


# -- parser -------------------------------------------------------------------

_FACTORS = sorted((b.value for b in Base), key=len, reverse=True)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        # compacted characters with their original offsets
        self.chars = "".join(c for c in text if not c.isspace())
        self.offsets = [i for i, c in enumerate(text) if not c.isspace()]
        self.i = 0

    def where(self, i=None) -> int:
        i = self.i if i is None else i
        if i < len(self.offsets):
            return self.offsets[i]
        return len(self.text)

    def fail(self, message, i=None):
        raise ParseError(message, self.text, self.where(i))

    def peek(self, literal: str) -> bool:
        return self.chars.startswith(literal, self.i)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.i += len(literal)
            return True
        return False

    def expect(self, literal: str):
        if not self.accept(literal):
            found = self.chars[self.i:self.i + 8] or "end of input"
            self.fail(f"expected {literal!r}, found {found!r}")

    def integer(self, signed=True) -> int:
        start = self.i
        if signed and self.chars[self.i:self.i + 1] in ("-", "+"):
            self.i += 1
        digits_at = self.i
        while self.i < len(self.chars) and self.chars[self.i].isdigit():
            self.i += 1
        if self.i == digits_at:
            self.fail("expected an integer", start)
        return int(self.chars[start:self.i])

    def rational(self) -> Fraction:
        num = self.integer()
        if self.accept("/"):
            den_at = self.i
            den = self.integer(signed=False)
            if den == 0:
                self.fail("zero denominator in exponent", den_at)
            return Fraction(num, den)
        return Fraction(num)

    def factor(self):
        for lit in _FACTORS:
            if self.peek(lit):
                at = self.i
                self.i += len(lit)
                return Base(lit), at
        found = self.chars[self.i:self.i + 8] or "end of input"
        self.fail(f"expected a trig factor such as 'sin(x)', found {found!r}")

    def term(self):
        if self.accept("sqrt("):
            base, at = self.factor()
            self.expect(")")
            return base, Fraction(1, 2), at
        base, at = self.factor()
        exponent = Fraction(1)
        if self.accept("^"):
            if self.accept("("):
                exponent = self.rational()
                self.expect(")")
            else:
                exponent = Fraction(self.integer())
        return base, exponent, at

    def parse(self) -> TrigIntegrand:
        self.expect("int")
        self.expect("[")
        self.expect("0")
        self.expect(",")
        if self.accept("pi/2"):
            upper = Upper.HALF_PI
        elif self.accept("pi/4"):
            upper = Upper.QUARTER_PI
        else:
            self.fail("upper limit must be 'pi/2' or 'pi/4'")
        self.expect("]")

        terms = []
        if not self.accept("1"):
            terms.append(self.term())
        while True:
            if self.accept("*"):
                base, e, at = self.term()
                terms.append((base, e, at))
            elif self.accept("/"):
                base, e, at = self.term()
                terms.append((base, -e, at))
            else:
                break
        self.expect("dx")
        if self.i != len(self.chars):
            self.fail("unexpected trailing input")

        for base, e, at in terms:
            if base is Base.COS2X and e != 0 and upper is Upper.HALF_PI:
                raise IntegrandDomainError(
                    "cos(2x) on half-pi interval", self.text, self.where(at)
                )
        alpha, beta_exp, gamma_exp = normalize((b, e) for b, e, _ in terms)
        return TrigIntegrand(alpha, beta_exp, gamma_exp, upper)


def parse(text: str) -> TrigIntegrand:
    """Parse DSL source into a normalized :class:`TrigIntegrand`.

    >>> parse("int[0,pi/2] tan(x)^(1/3) dx")
    TrigIntegrand(alpha=Fraction(1, 3), beta_exp=Fraction(-1, 3), gamma_exp=Fraction(0, 1), upper=<Upper.HALF_PI: 'pi/2'>)
    """
    if not isinstance(text, str):
        raise TypeError("integrand source must be a string")
    return _Parser(text).parse()
