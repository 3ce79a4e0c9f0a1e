"""
Real-valued gamma and beta kernel.

Log-gamma uses the Lanczos approximation with g = 607/128 and the 15-term
coefficient set published by Godfrey (the same set used by Numerical Recipes,
3rd edition, ``gammln``).  Gamma below 1/2 goes through the reflection formula.
Factorials and binomial coefficients are exact Python integers.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, EvaluationOverflow, PoleError

Rational = Fraction

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
# log of the largest finite double
_LOG_DBL_MAX = math.log(1.7976931348623157e308)


def _check_finite(x, name="x"):
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def sinpi(x: float) -> float:
    """sin(pi*x) with the argument reduced exactly before multiplying by pi."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    # r in [-1, 1]; fold onto [-1/2, 1/2]
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def cospi(x: float) -> float:
    """cos(pi*x), computed as sinpi(x + 1/2) after exact reduction."""
    return sinpi(0.5 - math.fmod(abs(x), 2.0))


def _is_nonpositive_integer(x):
    return x <= 0 and x == math.floor(x)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for finite x > 0."""
    x = float(x)
    if math.isnan(x) or math.isinf(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    series = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        series += _LANCZOS_COEF[k] / (x + k)
    t = x + _LANCZOS_G + 0.5
    return (x + 0.5) * math.log(t) - t + math.log(2.5066282746310005 * series / x)


def log_abs_gamma(x: float) -> tuple[int, float]:
    """Return ``(sign, log|Gamma(x)|)`` for any finite non-pole x."""
    x = float(x)
    _check_finite(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x >= 0.5:
        return 1, log_gamma(x)
    s = sinpi(x)
    sign = 1 if s > 0 else -1
    return sign, math.log(math.pi) - math.log(abs(s)) - log_gamma(1.0 - x)


def gamma(x: float) -> float:
    """Gamma(x) for finite x off the poles 0, -1, -2, ...

    Raises
    ------
    PoleError
        x is a nonpositive integer.
    EvaluationOverflow
        |Gamma(x)| is not representable.
    """
    x = float(x)
    _check_finite(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x >= 0.5:
        lg = log_gamma(x)
        if lg > _LOG_DBL_MAX:
            raise EvaluationOverflow(f"Gamma({x!r}) overflows")
        return math.exp(lg)
    # reflection keeps the approximation on its accurate range
    sign, lg = log_abs_gamma(x)
    if lg > _LOG_DBL_MAX:
        raise EvaluationOverflow(f"Gamma({x!r}) overflows")
    return sign * math.exp(lg)


def log_beta(a: float, b: float) -> float:
    a, b = float(a), float(b)
    if not (a > 0 and b > 0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"beta requires a, b > 0, got ({a!r}, {b!r})")
    if a > b:
        a, b = b, a
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def beta(a: float, b: float) -> float:
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), evaluated in log space."""
    lb = log_beta(a, b)
    if lb > _LOG_DBL_MAX:
        raise EvaluationOverflow(f"B({a!r}, {b!r}) overflows")
    return math.exp(lb)


def factorial(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"factorial requires a nonnegative integer, got {n!r}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Exact C(n, k) for 0 <= k <= n."""
    for v in (n, k):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise DomainError(f"binomial requires nonnegative integers, got ({n!r}, {k!r})")
    if k > n:
        raise DomainError(f"binomial requires k <= n, got ({n}, {k})")
    return math.comb(n, k)


def gamma_half_integer_coefficient(m: int) -> Fraction:
    """Exact rational c with Gamma(m + 1/2) = c * sqrt(pi)."""
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m!r}")
    return Fraction(math.factorial(2 * m), 4**m * math.factorial(m))


def gamma_half_integer(m: int):
    """Closed form of Gamma(m + 1/2) = sqrt(pi) (2m)! / (4^m m!).

    Returns a :class:`trigbeta.expr.ClosedForm`; e.g. ``m=2`` gives
    ``(3/4)·π^(1/2)``.
    """
    from .expr import Const, Pi, Pow, product

    coef = gamma_half_integer_coefficient(m)
    return product(Const(coef), Pow(Pi(), Fraction(1, 2)))
