"""
Reduction of trig-power integrals to beta closed forms.

Two evaluations are applied, keyed on the upper limit:

* [0, pi/2]:  int sin^(a-1) t cos^(b-1) t dt = B(a/2, b/2) / 2   (x = sin^2 t)
* [0, pi/4]:  int sin^a x cos^b x cos^c 2x dx = B((a+1)/2, c+1) / 2,
  valid when a + b + 2c + 2 = 0                           (t = tan x, s = t^2)

After the primary answer is produced, a bounded breadth-first pass of gamma
identities (duplication, reflection, half-integer and integer specializations)
generates the alternative forms that tables usually print.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import specfun
from .errors import ConstraintViolated, Divergent, DomainError, TrigBetaError
from .expr import (
    Beta,
    Binom,
    ClosedForm,
    Const,
    CosPi,
    Fact,
    Gamma,
    Mul,
    Pi,
    Pow,
    SinPi,
    _order_key,
    equivalent_numeric,
    product,
    render_latex,
    render_text,
)
from .integrand import TrigIntegrand, Upper, convergence_check, render

HALF = Fraction(1, 2)
MAX_DEPTH = 4
EQUIV_TOL = 1e-10


@dataclass(frozen=True)
class Step:
    rule_id: str
    reference: str
    description: str
    state_after: str


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    def render_text(self) -> str:
        lines = []
        for i, s in enumerate(self.steps, 1):
            lines.append(f"{i}. [{s.rule_id}] {s.description}  ({s.reference})")
            lines.append(f"   => {s.state_after}")
        return "\n".join(lines)

    def render_latex(self) -> str:
        rows = [f"&\\text{{{s.rule_id}}}: && {s.state_after}" for s in self.steps]
        return "\\begin{aligned}\n" + " \\\\\n".join(rows) + "\n\\end{aligned}"


@dataclass(frozen=True)
class ReductionOutcome:
    primary_form: ClosedForm
    alternative_forms: tuple[tuple[ClosedForm, tuple[str, ...]], ...]
    derivation: Derivation


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _require_convergent(ti: TrigIntegrand):
    verdict = convergence_check(ti)
    if not verdict.convergent:
        raise Divergent(verdict.offending_endpoint.value, verdict.reason)


def _outcome(primary: ClosedForm, steps: list[Step], alternatives: bool) -> ReductionOutcome:
    alts = tuple(apply_identities(primary)) if alternatives else ()
    return ReductionOutcome(primary, alts, Derivation(tuple(steps)))


def reduce_half_pi(ti: TrigIntegrand, alternatives: bool = True) -> ReductionOutcome:
    """Closed form of sin^alpha x cos^beta x over [0, pi/2]: B((alpha+1)/2, (beta+1)/2) / 2."""
    if ti.upper is not Upper.HALF_PI:
        raise DomainError("reduce_half_pi needs the [0, pi/2] interval")
    _require_convergent(ti)
    a, b = ti.alpha + 1, ti.beta_exp + 1
    p, q = a / 2, b / 2
    primary = product(Const(HALF), Beta(p, q))
    steps = [
        Step("master-half-pi", "GR 3.621.5",
             f"int_0^(pi/2) sin^(a-1) t cos^(b-1) t dt = (1/2) B(a/2, b/2) with a = {_q(a)}, b = {_q(b)}",
             render(ti)),
        Step("substitute-sin-squared", "x = sin^2 t",
             "dx = 2 sin t cos t dt maps [0, pi/2] onto [0, 1]",
             f"(1/2) int_0^1 x^({_q(p - 1)}) (1-x)^({_q(q - 1)}) dx"),
        Step("beta-integral", "B(p,q) = int_0^1 x^(p-1) (1-x)^(q-1) dx",
             f"convergent since p = {_q(p)} > 0 and q = {_q(q)} > 0",
             render_text(primary)),
    ]
    return _outcome(primary, steps, alternatives)


def reduce_quarter_pi(ti: TrigIntegrand, alternatives: bool = True) -> ReductionOutcome:
    """Closed form over [0, pi/4] under alpha + beta + 2 gamma + 2 = 0.

    Raises :class:`ConstraintViolated` (checked exactly) when the condition fails.
    """
    if ti.upper is not Upper.QUARTER_PI:
        raise DomainError("reduce_quarter_pi needs the [0, pi/4] interval")
    _require_convergent(ti)
    defect = ti.alpha + ti.beta_exp + 2 * ti.gamma_exp + 2
    if defect != 0:
        raise ConstraintViolated(defect)
    a, c = ti.alpha, ti.gamma_exp
    p, q = (a + 1) / 2, c + 1
    primary = product(Const(HALF), Beta(p, q))
    steps = [
        Step("master-quarter-pi", "a + b + 2c + 2 = 0",
             f"a + b + 2c + 2 = {_q(a)} + ({_q(ti.beta_exp)}) + 2({_q(c)}) + 2 = 0 holds exactly",
             render(ti)),
        Step("substitute-tan", "t = tan x",
             "cos 2x = (1-t^2)/(1+t^2), dx = dt/(1+t^2); the (1+t^2) power is -(a+b+2c+2)/2 = 0",
             f"int_0^1 t^({_q(a)}) (1-t^2)^({_q(c)}) dt"),
        Step("substitute-square", "s = t^2",
             "dt = ds / (2 sqrt s)",
             f"(1/2) int_0^1 s^({_q((a - 1) / 2)}) (1-s)^({_q(c)}) ds"),
        Step("beta-integral", "B(p,q) = int_0^1 x^(p-1) (1-x)^(q-1) dx",
             f"p = (a+1)/2 = {_q(p)}, q = c+1 = {_q(q)}",
             render_text(primary)),
    ]
    return _outcome(primary, steps, alternatives)


def reduce_integrand(ti: TrigIntegrand, alternatives: bool = True) -> ReductionOutcome:
    if ti.upper is Upper.HALF_PI:
        return reduce_half_pi(ti, alternatives)
    return reduce_quarter_pi(ti, alternatives)


# -- identity rewriting -------------------------------------------------------

_TWO = Const(2)


class _Mono:
    """coef * prod(atom^exp); the working representation for rewrites."""

    __slots__ = ("coef", "powers")

    def __init__(self, coef=Fraction(1), powers=None):
        self.coef = Fraction(coef)
        self.powers: dict[ClosedForm, Fraction] = dict(powers or {})

    def copy(self) -> "_Mono":
        return _Mono(self.coef, self.powers)

    def mul_atom(self, atom: ClosedForm, e) -> "_Mono":
        e = Fraction(e)
        if e == 0:
            return self
        if isinstance(atom, Const):
            v = atom.value
            if v == 1:
                return self
            if e.denominator == 1 and v != 2:
                self.coef *= v ** int(e)
                return self
            log2 = _log2_exact(v)
            if log2 is not None:
                atom, e = _TWO, e * log2
        if isinstance(atom, (Binom, Fact)) and _trivial_int(atom):
            return self
        if isinstance(atom, Gamma) and atom.arg in (1, 2):
            return self
        unit = _unit_trig(atom)
        if unit is not None:
            if e.denominator != 1:
                if unit < 0:
                    raise DomainError("fractional power of a negative trig value")
                return self
            self.coef *= Fraction(unit) ** int(e)
            return self
        self.powers[atom] = self.powers.get(atom, Fraction(0)) + e
        if self.powers[atom] == 0:
            del self.powers[atom]
        return self

    def remove(self, atom) -> Fraction:
        return self.powers.pop(atom)


def _trivial_int(atom) -> bool:
    if isinstance(atom, Binom):
        return atom.k in (0, atom.n)
    return atom.n in (0, 1)


def _unit_trig(atom):
    """+-1 when a sin/cos atom is exactly a unit, else None."""
    if isinstance(atom, SinPi) and (atom.r - HALF).denominator == 1:
        return 1 if (atom.r - HALF) % 2 == 0 else -1
    if isinstance(atom, CosPi) and atom.r.denominator == 1:
        return 1 if atom.r % 2 == 0 else -1
    return None


def _log2_exact(v: Fraction):
    """k with v == 2**k, or None."""
    num, den = v.numerator, v.denominator
    if num <= 0:
        return None
    if num & (num - 1) == 0 and den == 1:
        return num.bit_length() - 1
    if num == 1 and den & (den - 1) == 0:
        return -(den.bit_length() - 1)
    return None


def _to_mono(cf: ClosedForm, m: _Mono | None = None, e=Fraction(1)) -> _Mono:
    m = _Mono() if m is None else m
    if isinstance(cf, Mul):
        for f in cf.factors:
            _to_mono(f, m, e)
    elif isinstance(cf, Pow):
        inner = _to_mono(cf.base)
        exp = cf.exp * e
        if inner.coef != 1:
            m.mul_atom(Const(inner.coef), exp)
        for atom, ae in inner.powers.items():
            m.mul_atom(atom, ae * exp)
    elif isinstance(cf, Const):
        m.mul_atom(cf, e)
    else:
        m.mul_atom(cf, e)
    return m


def _from_mono(m: _Mono) -> ClosedForm:
    coef = m.coef
    powers = dict(m.powers)
    two = powers.pop(_TWO, None)
    if two is not None:
        # move the 2-adic part of the coefficient into the power of two
        k = _two_adic(coef)
        two += k
        coef /= Fraction(2) ** k
        if two.denominator == 1 and two >= 0:
            coef *= 2 ** int(two)
            two = None
    factors = []
    if coef != 1:
        factors.append(Const(coef))
    if two is not None and two != 0:
        factors.append(Pow(_TWO, two))
    for atom, e in powers.items():
        if e == 0:
            continue
        factors.append(atom if e == 1 else Pow(atom, e))
    return product(*factors)


def _two_adic(q: Fraction) -> int:
    if q == 0:
        return 0
    k = 0
    num, den = abs(q.numerator), q.denominator
    while num % 2 == 0:
        num //= 2
        k += 1
    while den % 2 == 0:
        den //= 2
        k -= 1
    return k


def _atoms(m: _Mono, kind):
    return sorted((a for a in m.powers if isinstance(a, kind)), key=_order_key)


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def _rule_beta_to_gamma(m: _Mono) -> Iterator[_Mono]:
    for b in _atoms(m, Beta):
        n = m.copy()
        e = n.remove(b)
        n.mul_atom(Gamma(b.a), e).mul_atom(Gamma(b.b), e).mul_atom(Gamma(b.a + b.b), -e)
        yield n


def _rule_beta_duplication(m: _Mono) -> Iterator[_Mono]:
    # B(a, 1/2) = 2^(2a-1) B(a, a), and B(x, y) = 2^(1-2x) B(2x, y) when x + y = 1/2
    for b in _atoms(m, Beta):
        e = m.powers[b]
        options = []
        for x, y in ((b.a, b.b), (b.b, b.a)):
            if y == HALF and x != HALF:
                options.append((Beta(x, x), e * (2 * x - 1)))
            if x + y == HALF:
                options.append((Beta(2 * x, y), e * (1 - 2 * x)))
        if b.a == b.b and b.a != HALF:
            options.append((Beta(b.a, HALF), e * (1 - 2 * b.a)))
        for new_beta, two_exp in options:
            n = m.copy()
            n.remove(b)
            n.mul_atom(new_beta, e).mul_atom(_TWO, two_exp)
            yield n


def _rule_gamma_duplication(m: _Mono) -> Iterator[_Mono]:
    # Gamma(x) Gamma(x + 1/2) = 2^(1-2x) sqrt(pi) Gamma(2x)
    for g in _atoms(m, Gamma):
        partner = Gamma(g.arg + HALF)
        e = m.powers[g]
        if m.powers.get(partner) != e:
            continue
        x = g.arg
        if 2 * x <= 0 and _is_int(2 * x):
            continue
        n = m.copy()
        n.remove(g)
        n.remove(partner)
        n.mul_atom(_TWO, e * (1 - 2 * x)).mul_atom(Pi(), e / 2).mul_atom(Gamma(2 * x), e)
        yield n


def _rule_reflection(m: _Mono) -> Iterator[_Mono]:
    # Gamma(t) Gamma(1-t) = pi / sin(pi t)
    for g in _atoms(m, Gamma):
        t = g.arg
        if t >= 1 - t:
            continue
        partner = Gamma(1 - t)
        e = m.powers[g]
        if m.powers.get(partner) != e:
            continue
        n = m.copy()
        n.remove(g)
        n.remove(partner)
        n.mul_atom(Pi(), e).mul_atom(SinPi(t), -e)
        yield n
    # 1/Gamma(1-s) = Gamma(s) sin(pi s) / pi
    for g in _atoms(m, Gamma):
        e = m.powers[g]
        u = g.arg
        if e >= 0 or u >= 1 or _is_int(u):
            continue
        s = 1 - u
        n = m.copy()
        n.remove(g)
        n.mul_atom(Pi(), e).mul_atom(SinPi(s), -e).mul_atom(Gamma(s), -e)
        yield n


def _rule_trig(m: _Mono) -> Iterator[_Mono]:
    # sin(pi r) = cos(pi (r - 1/2)); cos is even
    for s in _atoms(m, SinPi):
        n = m.copy()
        e = n.remove(s)
        n.mul_atom(CosPi(abs(s.r - HALF)), e)
        yield n
    for c in _atoms(m, CosPi):
        if c.r < 0:
            n = m.copy()
            e = n.remove(c)
            n.mul_atom(CosPi(-c.r), e)
            yield n


def _rule_half_integer_gamma(m: _Mono) -> Iterator[_Mono]:
    # Gamma(k + 1/2) = sqrt(pi) (2k)! / (4^k k!)
    for g in _atoms(m, Gamma):
        k = g.arg - HALF
        e = m.powers[g]
        if not (_is_int(k) and k >= 0 and _is_int(e)):
            continue
        n = m.copy()
        n.remove(g)
        n.coef *= specfun.gamma_half_integer_coefficient(int(k)) ** int(e)
        n.mul_atom(Pi(), e / 2)
        yield n


def _rule_integer_gamma(m: _Mono) -> Iterator[_Mono]:
    for g in _atoms(m, Gamma):
        if _is_int(g.arg) and g.arg >= 1:
            n = m.copy()
            e = n.remove(g)
            n.mul_atom(Fact(int(g.arg) - 1), e)
            yield n


def _rule_beta_binomial(m: _Mono) -> Iterator[_Mono]:
    """Integer and half-integer beta values as binomials / factorials."""
    for b in _atoms(m, Beta):
        e = m.powers[b]
        seen = set()
        for x, y in ((b.a, b.b), (b.b, b.a)):
            if (x, y) in seen:
                continue
            seen.add((x, y))
            n = m.copy()
            n.remove(b)
            if _is_int(x - HALF) and _is_int(y - HALF) and x > 0 and y > 0:
                if x > y:
                    continue
                i, j = int(x - HALF), int(y - HALF)
                # B(i+1/2, j+1/2) = pi C(2i,i) C(2j,j) / (4^(i+j) C(i+j,i))
                n.mul_atom(Pi(), e).mul_atom(Binom(2 * i, i), e).mul_atom(Binom(2 * j, j), e)
                n.mul_atom(Binom(i + j, i), -e).mul_atom(_TWO, -2 * (i + j) * e)
            elif _is_int(x) and _is_int(y - HALF):
                i, j = int(x), int(y - HALF)
                # B(i, j+1/2) = 2^(2i) C(2j,j) / (i C(2i+2j,i+j) C(i+j,i))
                n.mul_atom(_TWO, 2 * i * e).mul_atom(Const(i), -e).mul_atom(Binom(2 * j, j), e)
                n.mul_atom(Binom(2 * i + 2 * j, i + j), -e).mul_atom(Binom(i + j, i), -e)
            elif _is_int(x) and _is_int(y):
                if x > y:
                    continue
                i, j = int(x), int(y)
                if i == j:
                    # B(k+1, k+1) = 1 / ((2k+1) C(2k, k))
                    k = i - 1
                    n.mul_atom(Const(2 * k + 1), -e).mul_atom(Binom(2 * k, k), -e)
                else:
                    n.mul_atom(Fact(i - 1), e).mul_atom(Fact(j - 1), e)
                    n.mul_atom(Fact(i + j - 1), -e)
            else:
                continue
            yield n


RULES = (
    ("beta-duplication", _rule_beta_duplication),
    ("beta-binomial", _rule_beta_binomial),
    ("beta-to-gamma", _rule_beta_to_gamma),
    ("gamma-duplication", _rule_gamma_duplication),
    ("reflection", _rule_reflection),
    ("half-integer-gamma", _rule_half_integer_gamma),
    ("integer-gamma-factorial", _rule_integer_gamma),
    ("trig-shift", _rule_trig),
)


def apply_identities(cf: ClosedForm, max_depth: int = MAX_DEPTH) -> list[tuple[ClosedForm, tuple[str, ...]]]:
    """Forms reachable from ``cf`` by at most ``max_depth`` identity rewrites.

    Breadth-first, deduplicated on rendered text; every returned form has been
    checked numerically against ``cf`` at relative tolerance 1e-10.
    """
    seen = {render_text(cf)}
    results: list[tuple[ClosedForm, tuple[str, ...]]] = []
    frontier = deque([(_to_mono(cf), ())])
    for _ in range(max_depth):
        next_frontier = deque()
        for mono, trail in frontier:
            for rule_id, rule in RULES:
                try:
                    candidates = list(rule(mono))
                except TrigBetaError:
                    continue
                for cand in candidates:
                    try:
                        form = _from_mono(cand)
                        key = render_text(form)
                        if key in seen:
                            continue
                        seen.add(key)
                        if not equivalent_numeric(form, cf, EQUIV_TOL):
                            continue
                    except (TrigBetaError, ArithmeticError):
                        continue
                    new_trail = trail + (rule_id,)
                    results.append((form, new_trail))
                    next_frontier.append((cand, new_trail))
        frontier = next_frontier
    return results


__all__ = [
    "Derivation",
    "ReductionOutcome",
    "Step",
    "apply_identities",
    "reduce_half_pi",
    "reduce_integrand",
    "reduce_quarter_pi",
    "render_latex",
]
