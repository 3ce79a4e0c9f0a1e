"""
Closed-form expression trees.

A closed form is a product of powers of a few atoms: rational constants, pi,
Gamma and Beta at rational arguments, sin/cos at rational multiples of pi,
binomial coefficients and factorials.  There are no sums.  Trees are immutable
and canonical up to Mul flattening, folding of constant factors and a fixed
factor order, so structurally equal answers compare equal and render equally.

Numeric evaluation is carried out on ``(sign, log|value|)`` pairs so that long
products of large and small gamma values neither overflow nor underflow early.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar, Mapping

from . import specfun
from .errors import DomainError, EvaluationOverflow, PoleError

_LOG_DBL_MAX = math.log(1.7976931348623157e308)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _as_int(value, what) -> int:
    f = as_fraction(value)
    if f.denominator != 1:
        raise DomainError(f"{what} must be an integer, got {f}")
    return int(f)


class ClosedForm:
    """Base class of all expression nodes."""

    rank: ClassVar[int] = 99

    def __str__(self):
        return render_text(self)

    def __mul__(self, other):
        return product(self, other)

    def __pow__(self, exponent):
        return power(self, as_fraction(exponent))


@dataclass(frozen=True)
class Const(ClosedForm):
    value: Fraction
    rank: ClassVar[int] = 0

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))


@dataclass(frozen=True)
class Pi(ClosedForm):
    rank: ClassVar[int] = 3


@dataclass(frozen=True)
class Gamma(ClosedForm):
    arg: Fraction
    rank: ClassVar[int] = 4

    def __post_init__(self):
        arg = as_fraction(self.arg)
        if arg <= 0 and arg.denominator == 1:
            raise PoleError(f"Gamma({arg}) is a pole")
        object.__setattr__(self, "arg", arg)


@dataclass(frozen=True)
class Beta(ClosedForm):
    a: Fraction
    b: Fraction
    rank: ClassVar[int] = 5

    def __post_init__(self):
        a, b = as_fraction(self.a), as_fraction(self.b)
        if a <= 0 or b <= 0:
            raise DomainError(f"B({a}, {b}) needs positive arguments")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class SinPi(ClosedForm):
    """sin(pi * r)."""

    r: Fraction
    rank: ClassVar[int] = 6

    def __post_init__(self):
        object.__setattr__(self, "r", as_fraction(self.r))


@dataclass(frozen=True)
class CosPi(ClosedForm):
    """cos(pi * r)."""

    r: Fraction
    rank: ClassVar[int] = 7

    def __post_init__(self):
        object.__setattr__(self, "r", as_fraction(self.r))


@dataclass(frozen=True)
class Binom(ClosedForm):
    n: int
    k: int
    rank: ClassVar[int] = 1

    def __post_init__(self):
        n, k = _as_int(self.n, "binomial n"), _as_int(self.k, "binomial k")
        if not 0 <= k <= n:
            raise DomainError(f"C({n},{k}) needs 0 <= k <= n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)


@dataclass(frozen=True)
class Fact(ClosedForm):
    n: int
    rank: ClassVar[int] = 2

    def __post_init__(self):
        n = _as_int(self.n, "factorial argument")
        if n < 0:
            raise DomainError(f"{n}! is undefined")
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class Pow(ClosedForm):
    base: ClosedForm
    exp: Fraction
    rank: ClassVar[int] = 8

    def __post_init__(self):
        exp = as_fraction(self.exp)
        object.__setattr__(self, "exp", exp)
        sign, _ = _signlog(self.base)
        if sign == 0 and exp < 0:
            raise DomainError(f"zero base raised to negative power {exp}")
        if sign < 0 and exp.denominator % 2 == 0:
            raise DomainError(f"negative base raised to {exp} is not real")


@dataclass(frozen=True)
class Mul(ClosedForm):
    factors: tuple
    rank: ClassVar[int] = 9

    def __post_init__(self):
        flat = []
        coef = None
        for f in self.factors:
            parts = f.factors if isinstance(f, Mul) else (f,)
            for p in parts:
                if not isinstance(p, ClosedForm):
                    raise TypeError(f"Mul factor must be a ClosedForm, got {p!r}")
                if isinstance(p, Const):
                    coef = p.value if coef is None else coef * p.value
                else:
                    flat.append(p)
        if coef is not None and (coef != 1 or len(flat) < 2):
            flat.append(Const(coef))
        if len(flat) < 2:
            raise DomainError("Mul needs at least two factors after folding")
        object.__setattr__(self, "factors", tuple(sorted(flat, key=_order_key)))


def _order_key(node):
    if isinstance(node, Pow):
        return (node.base.rank, 1, render_text(node))
    return (node.rank, 0, render_text(node))


def product(*factors: ClosedForm) -> ClosedForm:
    """Multiply factors, returning a plain node when fewer than two remain."""
    flat = []
    coef = Fraction(1)
    for f in factors:
        for p in (f.factors if isinstance(f, Mul) else (f,)):
            if isinstance(p, Const):
                coef *= p.value
            else:
                flat.append(p)
    if coef != 1 or not flat:
        flat.append(Const(coef))
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def power(base: ClosedForm, exp) -> ClosedForm:
    exp = as_fraction(exp)
    if exp == 1:
        return base
    if isinstance(base, Const) and exp.denominator == 1 and (base.value != 0 or exp > 0):
        return Const(base.value ** int(exp))
    return Pow(base, exp)


# -- numeric evaluation -------------------------------------------------------


def _log_int(n: int) -> float:
    return math.log(n)


def _trig_signlog(value: float):
    if value == 0.0:
        return 0, -math.inf
    return (1 if value > 0 else -1), math.log(abs(value))


def _signlog(node) -> tuple[int, float]:
    if isinstance(node, Const):
        v = node.value
        if v == 0:
            return 0, -math.inf
        return (1 if v > 0 else -1), _log_int(abs(v.numerator)) - _log_int(v.denominator)
    if isinstance(node, Pi):
        return 1, math.log(math.pi)
    if isinstance(node, Gamma):
        return specfun.log_abs_gamma(float(node.arg))
    if isinstance(node, Beta):
        return 1, specfun.log_beta(float(node.a), float(node.b))
    if isinstance(node, SinPi):
        r = node.r
        if r.denominator == 1:
            return 0, -math.inf
        return _trig_signlog(specfun.sinpi(float(r % 2)))
    if isinstance(node, CosPi):
        r = node.r
        if r.denominator == 2:
            return 0, -math.inf
        return _trig_signlog(specfun.cospi(float(r % 2)))
    if isinstance(node, Binom):
        return 1, _log_int(math.comb(node.n, node.k))
    if isinstance(node, Fact):
        return 1, _log_int(math.factorial(node.n))
    if isinstance(node, Pow):
        sign, lg = _signlog(node.base)
        e = node.exp
        if e == 0:
            return 1, 0.0
        if sign == 0:
            return 0, -math.inf
        if sign < 0 and e.numerator % 2 == 0:
            sign = 1
        return sign, lg * float(e)
    if isinstance(node, Mul):
        sign, total = 1, 0.0
        for f in node.factors:
            s, lg = _signlog(f)
            if s == 0:
                return 0, -math.inf
            sign *= s
            total += lg
        return sign, total
    raise TypeError(f"not a closed form: {node!r}")


def eval_closed_form(cf: ClosedForm) -> float:
    """Numeric value of ``cf``.

    Raises EvaluationOverflow when the magnitude is not representable and
    PoleError/DomainError when a gamma or beta argument is invalid.
    """
    sign, lg = _signlog(cf)
    if sign == 0:
        return 0.0
    if lg > _LOG_DBL_MAX:
        raise EvaluationOverflow(f"value of {render_text(cf)} overflows")
    return sign * math.exp(lg)


def equivalent_numeric(a: ClosedForm, b: ClosedForm, rel_tol: float) -> bool:
    va, vb = eval_closed_form(a), eval_closed_form(b)
    return abs(va - vb) <= rel_tol * max(abs(va), abs(vb), 1.0)


# -- rendering ----------------------------------------------------------------


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pi_multiple_text(r: Fraction) -> str:
    if r == 0:
        return "0"
    num = r.numerator
    head = "-" if num < 0 else ""
    num = abs(num)
    core = "π" if num == 1 else f"{num}π"
    if r.denominator != 1:
        core += f"/{r.denominator}"
    return head + core


def _exp_text(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({_frac_text(e)})"


def _base_text(node) -> str:
    text = render_text(node)
    if isinstance(node, (Mul, Pow)) or (isinstance(node, Const) and node.value < 0
                                        and node.value.denominator == 1):
        return f"({text})"
    return text


def render_text(cf: ClosedForm) -> str:
    """Plain-text rendering, e.g. ``(1/2)·B(1/4, 1/2)`` or ``C(4,2)·π/32``."""
    if isinstance(cf, Const):
        v = cf.value
        return str(v.numerator) if v.denominator == 1 else f"({_frac_text(v)})"
    if isinstance(cf, Pi):
        return "π"
    if isinstance(cf, Gamma):
        return f"Γ({_frac_text(cf.arg)})"
    if isinstance(cf, Beta):
        return f"B({_frac_text(cf.a)}, {_frac_text(cf.b)})"
    if isinstance(cf, SinPi):
        return f"sin({_pi_multiple_text(cf.r)})"
    if isinstance(cf, CosPi):
        return f"cos({_pi_multiple_text(cf.r)})"
    if isinstance(cf, Binom):
        return f"C({cf.n},{cf.k})"
    if isinstance(cf, Fact):
        return f"{cf.n}!"
    if isinstance(cf, Pow):
        return f"{_base_text(cf.base)}^{_exp_text(cf.exp)}"
    if isinstance(cf, Mul):
        num, den = [], []
        for f in cf.factors:
            if isinstance(f, Pow) and f.exp < 0:
                den.append(_denominator_text(f.base, -f.exp))
            else:
                num.append(render_text(f))
        return ("·".join(num) if num else "1") + "".join("/" + d for d in den)
    raise TypeError(f"not a closed form: {cf!r}")


def _denominator_text(base, exp: Fraction) -> str:
    if exp == 1:
        return _base_text(base)
    return f"{_base_text(base)}^{_exp_text(exp)}"


def _tex_frac(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    return f"{sign}\\tfrac{{{abs(q.numerator)}}}{{{q.denominator}}}"


def _tex_pi_multiple(r: Fraction) -> str:
    if r == 0:
        return "0"
    sign = "-" if r < 0 else ""
    num = abs(r.numerator)
    top = "\\pi" if num == 1 else f"{num}\\pi"
    if r.denominator == 1:
        return sign + top
    return f"{sign}\\frac{{{top}}}{{{r.denominator}}}"


def _tex_base(node) -> str:
    text = render_latex(node)
    if isinstance(node, (Mul, Pow)) or (isinstance(node, Const) and
                                        (node.value < 0 or node.value.denominator != 1)):
        return f"\\left({text}\\right)"
    return text


def _tex_power(base, exp: Fraction) -> str:
    if exp == 1:
        return render_latex(base)
    if exp == Fraction(1, 2):
        return f"\\sqrt{{{render_latex(base)}}}"
    e = str(exp.numerator) if exp.denominator == 1 else f"{exp.numerator}/{exp.denominator}"
    return f"{_tex_base(base)}^{{{e}}}"


def render_latex(cf: ClosedForm) -> str:
    if isinstance(cf, Const):
        return _tex_frac(cf.value)
    if isinstance(cf, Pi):
        return "\\pi"
    if isinstance(cf, Gamma):
        return f"\\Gamma\\left({_tex_frac(cf.arg)}\\right)"
    if isinstance(cf, Beta):
        return f"B\\left({_tex_frac(cf.a)}, {_tex_frac(cf.b)}\\right)"
    if isinstance(cf, SinPi):
        return f"\\sin\\left({_tex_pi_multiple(cf.r)}\\right)"
    if isinstance(cf, CosPi):
        return f"\\cos\\left({_tex_pi_multiple(cf.r)}\\right)"
    if isinstance(cf, Binom):
        return f"\\binom{{{cf.n}}}{{{cf.k}}}"
    if isinstance(cf, Fact):
        return f"{cf.n}!"
    if isinstance(cf, Pow):
        return _tex_power(cf.base, cf.exp)
    if isinstance(cf, Mul):
        num, den = [], []
        for f in cf.factors:
            if isinstance(f, Pow) and f.exp < 0:
                den.append(_tex_power(f.base, -f.exp))
            else:
                num.append(_tex_base(f) if isinstance(f, Mul) else render_latex(f))
        top = " \\cdot ".join(num) if num else "1"
        if not den:
            return top
        return f"\\frac{{{top}}}{{{' '.join(den)}}}"
    raise TypeError(f"not a closed form: {cf!r}")


def print_closed_form(cf: ClosedForm, latex: bool = False) -> str:
    return render_latex(cf) if latex else render_text(cf)


# -- JSON ---------------------------------------------------------------------

_BIN_OPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def eval_param_expr(text, env: Mapping[str, int] | None = None) -> Fraction:
    """Evaluate an exact affine-style expression such as ``"2*n - 1/2"``.

    Only integer literals, names bound in ``env``, ``+ - * /`` and unary minus
    are accepted; division is exact.
    """
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise DomainError(f"expected a rational expression, got {text!r}")
    env = env or {}
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"bad rational expression {text!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise DomainError(f"unbound parameter {node.id!r} in {text!r}")
            return Fraction(env[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BIN_OPS:
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Div) and right == 0:
                raise DomainError(f"division by zero in {text!r}")
            return _BIN_OPS[type(node.op)](left, right)
        raise DomainError(f"unsupported syntax in rational expression {text!r}")

    return walk(tree)


def _q(value: Fraction) -> str:
    return _frac_text(value)


def to_json(cf: ClosedForm) -> dict:
    """Node-tagged JSON mirroring the tree one-to-one."""
    if isinstance(cf, Const):
        return {"op": "const", "value": _q(cf.value)}
    if isinstance(cf, Pi):
        return {"op": "pi"}
    if isinstance(cf, Gamma):
        return {"op": "gamma", "arg": _q(cf.arg)}
    if isinstance(cf, Beta):
        return {"op": "beta", "a": _q(cf.a), "b": _q(cf.b)}
    if isinstance(cf, SinPi):
        return {"op": "sinpi", "r": _q(cf.r)}
    if isinstance(cf, CosPi):
        return {"op": "cospi", "r": _q(cf.r)}
    if isinstance(cf, Binom):
        return {"op": "binom", "n": cf.n, "k": cf.k}
    if isinstance(cf, Fact):
        return {"op": "fact", "n": cf.n}
    if isinstance(cf, Pow):
        return {"op": "pow", "base": to_json(cf.base), "exp": _q(cf.exp)}
    if isinstance(cf, Mul):
        return {"op": "mul", "factors": [to_json(f) for f in cf.factors]}
    raise TypeError(f"not a closed form: {cf!r}")


def from_json(obj, env: Mapping[str, int] | None = None) -> ClosedForm:
    """Build a tree from node-tagged JSON.

    Scalar fields may be integers, rational strings, or parameter expressions
    resolved against ``env``.  ``mul`` nodes go through :func:`product`, so a
    template that folds to a single factor at some binding is still accepted.
    """
    if not isinstance(obj, dict) or "op" not in obj:
        raise DomainError(f"expression node must be an object with 'op', got {obj!r}")
    op = obj["op"]

    def q(key):
        if key not in obj:
            raise DomainError(f"'{op}' node is missing field '{key}'")
        return eval_param_expr(obj[key], env)

    if op == "const":
        return Const(q("value"))
    if op == "pi":
        return Pi()
    if op == "gamma":
        return Gamma(q("arg"))
    if op == "beta":
        return Beta(q("a"), q("b"))
    if op == "sinpi":
        return SinPi(q("r"))
    if op == "cospi":
        return CosPi(q("r"))
    if op == "binom":
        return Binom(q("n"), q("k"))
    if op == "fact":
        return Fact(q("n"))
    if op == "pow":
        return Pow(from_json(obj.get("base"), env), q("exp"))
    if op == "mul":
        factors = obj.get("factors")
        if not isinstance(factors, list) or not factors:
            raise DomainError("'mul' node needs a non-empty 'factors' list")
        return product(*(from_json(f, env) for f in factors))
    raise DomainError(f"unknown expression op {op!r}")
