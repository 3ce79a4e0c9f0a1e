"""
Command-line front end.

    trigbeta eval "int[0,pi/2] tan(x)^(1/2) dx" [--trace] [--tol 1e-10]
    trigbeta verify [--corpus FILE] [--format text|json|md] [--jobs N]
    trigbeta identities [--samples 1000] [--seed 0]

Exit codes: 0 success, 1 usage or domain error, 2 closed form and quadrature
disagree (or a corpus row fails), 3 no closed form exists (eval only).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from . import expr, quad, report
from .corpus import DEFAULT_REL_TOL, discrepancy, load_corpus, run_corpus
from .errors import ConstraintViolated, TrigBetaError
from .identities import render_identities, run_identities
from .integrand import parse
from .reduce import reduce_integrand

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DISAGREE = 2
EXIT_NO_CLOSED_FORM = 3


@dataclass
class CliConfig:
    command: str
    input: str = ""
    corpus_path: Optional[str] = None
    rel_tol: float = DEFAULT_REL_TOL
    format: str = "text"
    trace: bool = False
    jobs: int = 1
    seed: int = 0
    samples: int = 1000


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; 2 means "disagreement" here
    def error(self, message):
        raise _UsageError(message)


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {n}")
    return n


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _u64(text: str) -> int:
    n = int(text, 0)
    if not 0 <= n < 2 ** 64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", dest="rel_tol", type=_positive_float, default=DEFAULT_REL_TOL,
                        help="relative tolerance, with a max(1, |value|) floor (default 1e-10)")
    common.add_argument("--format", choices=("text", "json", "md"), default="text")

    parser = _Parser(prog="trigbeta", description="Beta-function closed forms for trigonometric integrals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="reduce and check one integral")
    p_eval.add_argument("input", help='integrand, e.g. "int[0,pi/2] sin(x)^(1/2) dx"')
    p_eval.add_argument("--trace", action="store_true", help="show the derivation and alternative forms")

    p_verify = sub.add_parser("verify", parents=[common], help="verify the table-entry corpus")
    p_verify.add_argument("--corpus", dest="corpus_path", help="corpus JSON (default: bundled)")
    p_verify.add_argument("--jobs", type=_positive_int, default=os.cpu_count() or 1)

    p_id = sub.add_parser("identities", parents=[common], help="randomized gamma identity checks")
    p_id.add_argument("--samples", type=_positive_int, default=1000)
    p_id.add_argument("--seed", type=_u64, default=0)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(**vars(ns))


# -- eval ---------------------------------------------------------------------


def _eval_payload(cfg: CliConfig) -> tuple[int, dict]:
    ti = parse(cfg.input)
    oracle = quad.integrate(ti)
    payload = {
        "integrand": str(ti),
        "exponents": {"alpha": str(ti.alpha), "beta": str(ti.beta_exp), "gamma": str(ti.gamma_exp)},
        "interval": ti.upper.value,
        "oracle": {
            "value": oracle.value, "error_estimate": oracle.error_estimate,
            "levels": oracle.levels_used, "evaluations": oracle.evaluations,
            "converged": oracle.converged,
        },
    }
    try:
        outcome = reduce_integrand(ti, alternatives=cfg.trace)
    except ConstraintViolated as exc:
        payload["closed_form"] = None
        payload["note"] = (
            f"no beta closed form: the [0, pi/4] reduction needs alpha + beta + 2*gamma + 2 = 0, "
            f"here it is {exc.defect}"
        )
        return EXIT_NO_CLOSED_FORM, payload

    value = expr.eval_closed_form(outcome.primary_form)
    rel = discrepancy(value, oracle.value)
    payload["closed_form"] = expr.to_json(outcome.primary_form)
    payload["closed_form_text"] = expr.render_text(outcome.primary_form)
    payload["closed_form_latex"] = expr.render_latex(outcome.primary_form)
    payload["value"] = value
    payload["rel_discrepancy"] = rel
    payload["rel_tol"] = cfg.rel_tol
    if cfg.trace:
        payload["derivation"] = [
            {"rule": s.rule_id, "reference": s.reference, "description": s.description,
             "state": s.state_after}
            for s in outcome.derivation.steps
        ]
        payload["alternatives"] = [
            {"form": expr.render_text(f), "value": expr.eval_closed_form(f), "rules": list(trail)}
            for f, trail in outcome.alternative_forms
        ]
    agree = rel <= cfg.rel_tol and oracle.converged
    payload["agree"] = agree
    return (EXIT_OK if agree else EXIT_DISAGREE), payload


def _eval_text(p: dict, md: bool) -> str:
    o = p["oracle"]
    oracle_txt = f"{o['value']:.15g} ± {o['error_estimate']:.1e}"
    if not o["converged"]:
        oracle_txt += " (not converged)"
    rows = [("integrand", p["integrand"])]
    if p["closed_form"] is None:
        rows += [("closed form", "none"), ("oracle", oracle_txt), ("note", p["note"])]
    else:
        rows += [
            ("closed form", p["closed_form_text"]),
            ("value", f"{p['value']:.15g}"),
            ("oracle", oracle_txt),
            ("rel discrepancy", f"{p['rel_discrepancy']:.2e} (tol {p['rel_tol']:g})"),
            ("verdict", "agree" if p["agree"] else "DISAGREE"),
        ]
    if md:
        lines = ["| field | value |", "|---|---|"]
        lines += [f"| {k} | `{v}` |" if k in ("integrand", "closed form") else f"| {k} | {v} |" for k, v in rows]
    else:
        lines = [f"{k + ':':<17}{v}" for k, v in rows]

    if "derivation" in p:
        lines.append("")
        lines.append("## Derivation" if md else "derivation:")
        for i, s in enumerate(p["derivation"], 1):
            lines.append(f"{i}. [{s['rule']}] {s['description']}  ({s['reference']})")
            lines.append(f"   => {s['state']}")
        lines.append("")
        lines.append("## Alternative forms" if md else "alternative forms:")
        for alt in p["alternatives"]:
            lines.append(f"- {alt['form']} = {alt['value']:.15g}  via {' > '.join(alt['rules'])}")
    return "\n".join(lines) + "\n"


def cmd_eval(cfg: CliConfig, out: TextIO, err: TextIO) -> int:
    try:
        status, payload = _eval_payload(cfg)
    except TrigBetaError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    if cfg.format == "json":
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(_eval_text(payload, md=cfg.format == "md"))
    return status


# -- verify -------------------------------------------------------------------


def cmd_verify(cfg: CliConfig, out: TextIO, err: TextIO) -> int:
    try:
        entries = load_corpus(cfg.corpus_path)
    except TrigBetaError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    rep = run_corpus(entries, cfg.rel_tol, cfg.jobs)
    if cfg.format == "json":
        out.write(report.render_json(rep))
    else:
        out.write(report.render_markdown(rep) if cfg.format == "md" else report.render_text(rep))
        err.write(report.timing_line(rep))
    return EXIT_OK if rep.n_fail == 0 else EXIT_DISAGREE


# -- identities ---------------------------------------------------------------


def cmd_identities(cfg: CliConfig, out: TextIO, err: TextIO) -> int:
    results = run_identities(cfg.samples, cfg.seed)
    if cfg.format == "json":
        doc = {
            "seed": cfg.seed,
            "samples": cfg.samples,
            "identities": [
                {"name": r.name, "statement": r.statement, "max_rel_error": r.max_rel_error,
                 "worst_argument": list(r.worst_argument), "tolerance": r.tolerance,
                 "passed": r.passed}
                for r in results
            ],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"seed {cfg.seed}, {cfg.samples} samples per identity\n")
        out.write(render_identities(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_DISAGREE


_COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "identities": cmd_identities}


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        cfg = parse_config(argv)
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    return _COMMANDS[cfg.command](cfg, out, err)


if __name__ == "__main__":
    sys.exit(main())
