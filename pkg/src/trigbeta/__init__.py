"""Beta-function closed forms for sin/cos power integrals over [0, pi/2] and [0, pi/4]."""

from .corpus import load_corpus, run_corpus, verify_entry
from .errors import (
    ConstraintViolated,
    CorpusError,
    Divergent,
    DomainError,
    EvaluationOverflow,
    IntegrandDomainError,
    ParseError,
    PoleError,
    TrigBetaError,
)
from .expr import eval_closed_form, print_closed_form, render_latex, render_text
from .integrand import TrigIntegrand, Upper, parse
from .quad import integrate
from .reduce import apply_identities, reduce_half_pi, reduce_integrand, reduce_quarter_pi
from .specfun import beta, gamma, log_beta, log_gamma

__all__ = [
    "ConstraintViolated", "CorpusError", "Divergent", "DomainError", "EvaluationOverflow",
    "IntegrandDomainError", "ParseError", "PoleError", "TrigBetaError", "TrigIntegrand",
    "Upper", "apply_identities", "beta", "eval_closed_form", "gamma", "integrate",
    "load_corpus", "log_beta", "log_gamma", "parse", "print_closed_form", "reduce_half_pi",
    "reduce_integrand", "reduce_quarter_pi", "render_latex", "render_text", "run_corpus",
    "verify_entry",
]
