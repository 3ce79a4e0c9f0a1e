"""
Tanh-sinh (double-exponential) quadrature on [0, U].

The substitution x = U/2 (1 + tanh(pi/2 sinh t)) clusters nodes doubly
exponentially at both endpoints.  Distances to the two endpoints are carried
in log form, so integrable power singularities x^p (p > -1) are summed well
past the point where the distance itself underflows.  Each level halves the
step in t and reuses the previous level's sum; the error estimate is the
difference between consecutive levels.

Only elementary functions are used here: this module is the independent check
on everything the gamma kernel produces.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import Divergent, DomainError
from .integrand import TrigIntegrand, Upper, convergence_check

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-11
DEFAULT_MAX_LEVEL = 12
MIN_LEVEL = 3

# t range: at t = 10 the endpoint distance is about exp(-pi sinh 10) ~ exp(-34600),
# enough for contributions of x^(-0.98) to fall below 1e-300
_T_MAX = 10.0
_LOG_TINY = math.log(1e-300)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    levels_used: int
    evaluations: int
    converged: bool
    # |S_L - S_{L-1}| for L = 1 .. levels_used
    level_errors: tuple[float, ...] = ()


@dataclass(frozen=True)
class _Nodes:
    """Nodes of one level for the reference interval [0, 1]; t >= 0 only."""

    t: np.ndarray
    log_w: np.ndarray       # log of dx/dt at t (both mirrored nodes share it)
    log_near: np.ndarray    # log distance from the near endpoint
    log_far: np.ndarray     # log distance from the far endpoint
    near: np.ndarray
    far: np.ndarray
    has_center: bool


_cache: dict[int, _Nodes] = {}
_cache_lock = threading.Lock()


def _build_level(level: int) -> _Nodes:
    h = 2.0 ** -level
    if level == 0:
        t = np.arange(0.0, _T_MAX + 0.5 * h, h)
    else:
        t = np.arange(h, _T_MAX + 0.5 * h, 2 * h)
    v = 0.5 * math.pi * np.sinh(t)
    # 1 - tanh v = 2/(1 + e^{2v}); on [0, 1] the near distance is 1/(1 + e^{2v})
    log_near = -np.logaddexp(0.0, 2.0 * v)
    log_far = -np.logaddexp(0.0, -2.0 * v)
    log_cosh_v = v + np.log1p(np.exp(-2.0 * v)) - math.log(2.0)
    log_w = math.log(0.25 * math.pi) + np.log(np.cosh(t)) - 2.0 * log_cosh_v
    with np.errstate(under="ignore"):
        near = np.exp(log_near)
    return _Nodes(t, log_w, log_near, log_far, near, np.exp(log_far), level == 0)


def _nodes(level: int) -> _Nodes:
    nodes = _cache.get(level)
    if nodes is None:
        with _cache_lock:
            nodes = _cache.get(level)
            if nodes is None:
                nodes = _build_level(level)
                _cache[level] = nodes
    return nodes


# log-integrand signature: (lo, log_lo, hi, log_hi) -> log f, where lo / hi are
# distances from the lower / upper endpoint
LogIntegrand = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _level_sum(log_f: LogIntegrand, upper: float, nodes: _Nodes) -> tuple[float, int]:
    log_u = math.log(upper)
    near = upper * nodes.near
    far = upper * nodes.far
    log_near = nodes.log_near + log_u
    log_far = nodes.log_far + log_u
    log_w = nodes.log_w + log_u
    with np.errstate(under="ignore", divide="ignore", invalid="ignore"):
        # node close to the lower endpoint, then its mirror close to the upper one
        lower_side = log_w + log_f(near, log_near, far, log_far)
        upper_side = log_w + log_f(far, log_far, near, log_near)
        terms = np.concatenate([lower_side, upper_side])
        if nodes.has_center:
            # t = 0 appears once, not mirrored
            terms[0] = -np.inf
        terms = np.where(terms < _LOG_TINY, -np.inf, terms)
        if np.isnan(terms).any():
            raise DomainError("integrand produced NaN")
        total = math.fsum(np.exp(terms).tolist())
    return total, 2 * len(nodes.t) - (1 if nodes.has_center else 0)


def tanh_sinh(log_f: LogIntegrand, upper: float, abs_tol: float = DEFAULT_ABS_TOL,
              rel_tol: float = DEFAULT_REL_TOL, max_level: int = DEFAULT_MAX_LEVEL,
              min_level: int = MIN_LEVEL) -> QuadratureResult:
    """Integrate exp(log_f) over [0, upper]."""
    if not (abs_tol > 0 and rel_tol > 0):
        raise DomainError("tolerances must be positive")
    if not 3 <= max_level <= 14:
        raise DomainError(f"max_level must lie in [3, 14], got {max_level}")
    min_level = min(min_level, max_level)

    raw = 0.0
    evaluations = 0
    prev = None
    value = err = math.inf
    history = []
    for level in range(max_level + 1):
        part, n = _level_sum(log_f, upper, _nodes(level))
        raw += part
        evaluations += n
        value = raw * 2.0 ** -level
        if prev is not None:
            err = abs(value - prev)
            history.append(err)
            if level >= min_level and err <= max(abs_tol, rel_tol * abs(value)):
                return QuadratureResult(value, err, level, evaluations, True, tuple(history))
        prev = value
    return QuadratureResult(value, err, max_level, evaluations, False, tuple(history))


def _log_sin(y: np.ndarray, log_y: np.ndarray) -> np.ndarray:
    # sin y ~ y once y is tiny; log_y stays finite after y underflows
    return np.where(y > 1e-150, np.log(np.sin(np.maximum(y, 1e-300))), log_y)


def _trig_log_integrand(alpha: float, beta: float, gamma: float, quarter: bool) -> LogIntegrand:
    def log_f(lo, log_lo, hi, log_hi):
        out = np.zeros_like(lo)
        if alpha:
            out = out + alpha * _log_sin(lo, log_lo)
        if beta:
            if quarter:
                out = out + beta * np.log(np.cos(lo))
            else:
                # cos x = sin(pi/2 - x)
                out = out + beta * _log_sin(hi, log_hi)
        if gamma:
            # cos 2x = sin(2 (pi/4 - x))
            out = out + gamma * _log_sin(2.0 * hi, log_hi + math.log(2.0))
        return out

    return log_f


def integrate(ti: TrigIntegrand, abs_tol: float = DEFAULT_ABS_TOL,
              rel_tol: float = DEFAULT_REL_TOL,
              max_level: int = DEFAULT_MAX_LEVEL, min_level: int = MIN_LEVEL) -> QuadratureResult:
    """Numerically integrate sin^a x cos^b x cos^c 2x over [0, pi/4] or [0, pi/2].

    Raises :class:`Divergent` if an endpoint exponent is <= -1.  A result
    that did not meet the tolerance by ``max_level`` is returned with
    ``converged=False``.
    """
    verdict = convergence_check(ti)
    if not verdict.convergent:
        raise Divergent(verdict.offending_endpoint.value, verdict.reason)
    quarter = ti.upper is Upper.QUARTER_PI
    log_f = _trig_log_integrand(float(ti.alpha), float(ti.beta_exp), float(ti.gamma_exp), quarter)
    return tanh_sinh(log_f, ti.upper.value_float, abs_tol, rel_tol, max_level, min_level)


def integrate_beta_def(a: float, b: float, tol: float = DEFAULT_ABS_TOL,
                       max_level: int = DEFAULT_MAX_LEVEL) -> QuadratureResult:
    """Direct quadrature of the beta integral of x^(a-1) (1-x)^(b-1) over [0, 1]."""
    a, b = float(a), float(b)
    if not (a > 0 and b > 0):
        raise DomainError(f"beta integral needs a, b > 0, got ({a}, {b})")
    pa, pb = a - 1.0, b - 1.0

    def log_f(lo, log_lo, hi, log_hi):
        out = np.zeros_like(lo)
        if pa:
            out = out + pa * log_lo
        if pb:
            out = out + pb * log_hi
        return out

    return tanh_sinh(log_f, 1.0, tol, tol, max_level)
