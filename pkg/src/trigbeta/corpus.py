"""
Table-entry corpus and the verification harness.

Each entry records an integrand (DSL text, or an exponent template with explicit
integer bindings), the closed form exactly as printed, and a status.  Entries
whose printed form is numerically wrong carry ``status = "corrected"`` plus the
corrected form; the harness confirms both that the printed form is refuted and
that the correction matches the quadrature oracle.
"""

from __future__ import annotations

import enum
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import expr, quad
from .errors import CorpusError, ParseError, TrigBetaError
from .integrand import TrigIntegrand, Upper, parse
from .reduce import reduce_integrand

DEFAULT_REL_TOL = 1e-10


class Status(enum.Enum):
    VERIFIED = "verified"
    ERRATUM_SUSPECTED = "erratum_suspected"
    CORRECTED = "corrected"


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    EXPECTED_MISMATCH = "expected_mismatch"


@dataclass(frozen=True)
class Instance:
    """One entry evaluated at one parameter binding."""

    binding: tuple[tuple[str, int], ...]
    integrand: TrigIntegrand
    expected_form: expr.ClosedForm
    corrected_form: Optional[expr.ClosedForm]


@dataclass(frozen=True)
class CorpusEntry:
    gr_id: str
    variant: str
    paper_anchor: str
    interval: Upper
    integrand_source: object
    params: tuple[str, ...]
    bindings: tuple[tuple[int, ...], ...]
    expected_form: dict
    status: Status
    corrected_form: Optional[dict]
    note: str

    @property
    def label(self) -> str:
        return f"{self.gr_id} ({self.variant})" if self.variant else self.gr_id

    def instantiate(self, binding: Sequence[int]) -> Instance:
        env = dict(zip(self.params, binding))
        if isinstance(self.integrand_source, str):
            ti = parse(self.integrand_source)
        else:
            tpl = self.integrand_source
            ti = TrigIntegrand(
                expr.eval_param_expr(tpl["alpha"], env),
                expr.eval_param_expr(tpl["beta"], env),
                expr.eval_param_expr(tpl["gamma"], env),
                self.interval,
            )
        if ti.upper is not self.interval:
            raise CorpusError(f"{self.label}: integrand interval does not match '{self.interval.value}'")
        expected = expr.from_json(self.expected_form, env)
        corrected = expr.from_json(self.corrected_form, env) if self.corrected_form else None
        return Instance(tuple(env.items()), ti, expected, corrected)

    def instances(self) -> list[Instance]:
        return [self.instantiate(b) for b in self.bindings]


_REQUIRED = ("gr_id", "paper_anchor", "interval", "integrand", "expected_form", "status", "note")


def _entry_from_json(index: int, raw) -> CorpusEntry:
    if not isinstance(raw, dict):
        raise CorpusError(f"entry {index}: expected an object")
    for key in _REQUIRED:
        if key not in raw:
            raise CorpusError(f"entry {index}: missing field '{key}'")
    gr_id = raw["gr_id"]
    try:
        interval = Upper(raw["interval"])
        status = Status(raw["status"])
    except ValueError as exc:
        raise CorpusError(f"entry {index} ({gr_id}): {exc}") from exc
    note = raw["note"]
    if status is not Status.VERIFIED and not note:
        raise CorpusError(f"entry {index} ({gr_id}): status '{status.value}' needs a note")
    corrected = raw.get("corrected_form")
    if status is Status.CORRECTED and corrected is None:
        raise CorpusError(f"entry {index} ({gr_id}): corrected entry needs 'corrected_form'")

    src = raw["integrand"]
    if isinstance(src, str):
        params, bindings = (), ((),)
    elif isinstance(src, dict) and "template" in src:
        tpl = src["template"]
        if not isinstance(tpl, dict) or any(k not in tpl for k in ("alpha", "beta", "gamma")):
            raise CorpusError(f"entry {index} ({gr_id}): template needs alpha, beta, gamma")
        params = tuple(src.get("params", ()))
        bindings = tuple(tuple(b) for b in src.get("bindings", ()))
        if not bindings:
            raise CorpusError(f"entry {index} ({gr_id}): template without bindings")
        for b in bindings:
            if len(b) != len(params) or not all(type(v) is int for v in b):
                raise CorpusError(f"entry {index} ({gr_id}): binding {list(b)} does not match params {list(params)}")
        src = tpl
    else:
        raise CorpusError(f"entry {index} ({gr_id}): integrand must be DSL text or a template")

    return CorpusEntry(
        gr_id=gr_id,
        variant=raw.get("variant", ""),
        paper_anchor=raw["paper_anchor"],
        interval=interval,
        integrand_source=src,
        params=params,
        bindings=bindings,
        expected_form=raw["expected_form"],
        status=status,
        corrected_form=corrected,
        note=note,
    )


def load_corpus(source=None) -> list[CorpusEntry]:
    """Load entries from a JSON path, a parsed document, or the bundled default.

    Every integrand is parsed and every closed form built at every binding, so
    a returned corpus is known to be well formed.
    """
    if source is None:
        text = resources.files("trigbeta").joinpath("data/corpus.json").read_text(encoding="utf-8")
        doc = json.loads(text)
    elif isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CorpusError(f"corpus {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise CorpusError("corpus document must be an object with an 'entries' list")

    entries = []
    seen = set()
    for index, raw in enumerate(doc["entries"]):
        entry = _entry_from_json(index, raw)
        for b in entry.bindings:
            key = (entry.gr_id, entry.variant, b)
            if key in seen:
                raise CorpusError(f"entry {index}: duplicate {entry.label} binding {list(b)}")
            seen.add(key)
            try:
                entry.instantiate(b)
            except ParseError as exc:
                raise CorpusError(f"{entry.label}: integrand does not parse: {exc}") from exc
            except TrigBetaError as exc:
                raise CorpusError(f"{entry.label} at {list(b)}: {exc}") from exc
        entries.append(entry)
    return entries


def bundled_anchors() -> list[str]:
    text = resources.files("trigbeta").joinpath("data/anchors.txt").read_text(encoding="utf-8")
    return [line for line in text.splitlines() if line]


# -- verification -------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    gr_id: str
    variant: str
    binding: tuple[tuple[str, int], ...]
    status: Status
    integrand: str
    expected_text: str
    closed_value: Optional[float]
    corrected_value: Optional[float]
    engine_value: Optional[float]
    engine_discrepancy: Optional[float]
    oracle_value: Optional[float]
    oracle_error: Optional[float]
    rel_discrepancy: Optional[float]
    printed_discrepancy: Optional[float]
    verdict: Verdict
    reason: str
    note: str

    @property
    def label(self) -> str:
        return f"{self.gr_id} ({self.variant})" if self.variant else self.gr_id

    @property
    def binding_text(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in self.binding)


@dataclass
class VerificationReport:
    rows: list[ReportRow]
    rel_tol: float
    wall_time: float = 0.0
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.counts:
            self.counts = {v.value: 0 for v in Verdict}
            for row in self.rows:
                self.counts[row.verdict.value] += 1

    @property
    def n_pass(self) -> int:
        return self.counts[Verdict.PASS.value]

    @property
    def n_fail(self) -> int:
        return self.counts[Verdict.FAIL.value]

    @property
    def n_expected_mismatch(self) -> int:
        return self.counts[Verdict.EXPECTED_MISMATCH.value]


def discrepancy(value: float, oracle: float) -> float:
    """Relative gap with a unit floor: |value - oracle| / max(1, |oracle|)."""
    return abs(value - oracle) / max(1.0, abs(oracle))


def _gr_key(gr_id: str):
    return tuple(int(p) if p.isdigit() else p for p in gr_id.split("."))


def _row_key(row: ReportRow):
    return (_gr_key(row.gr_id), row.variant, tuple(v for _, v in row.binding))


def _fail_row(entry: CorpusEntry, binding, reason: str, **values) -> ReportRow:
    base = dict(
        integrand="", expected_text="", closed_value=None, corrected_value=None,
        engine_value=None, engine_discrepancy=None, oracle_value=None, oracle_error=None,
        rel_discrepancy=None, printed_discrepancy=None,
    )
    base.update(values)
    return ReportRow(
        gr_id=entry.gr_id, variant=entry.variant,
        binding=tuple(zip(entry.params, binding)), status=entry.status,
        verdict=Verdict.FAIL, reason=reason, note=entry.note, **base,
    )


def verify_entry(entry: CorpusEntry, binding: Sequence[int] = (),
                 rel_tol: float = DEFAULT_REL_TOL) -> ReportRow:
    """Check one entry at one binding against the quadrature oracle.

    The checked form is the corrected one when present, otherwise the printed
    one.  The engine's own reduction is compared with the oracle too and its
    gap reported as ``engine_discrepancy``; it does not enter the verdict.
    Divergence, overflow and domain errors propagate with the entry label
    attached as ``exc.gr_id``.
    """
    binding = tuple(binding)
    try:
        inst = entry.instantiate(binding)
        ti = inst.integrand
        source = str(ti)
        expected_text = expr.render_text(inst.expected_form)
        closed = expr.eval_closed_form(inst.expected_form)
        corrected = expr.eval_closed_form(inst.corrected_form) if inst.corrected_form else None
        oracle = quad.integrate(ti)
        engine = expr.eval_closed_form(reduce_integrand(ti, alternatives=False).primary_form)
    except TrigBetaError as exc:
        exc.gr_id = entry.label
        raise

    printed_disc = discrepancy(closed, oracle.value)
    checked_disc = discrepancy(corrected, oracle.value) if corrected is not None else printed_disc
    values = dict(
        integrand=source, expected_text=expected_text, closed_value=closed,
        corrected_value=corrected, engine_value=engine,
        engine_discrepancy=discrepancy(engine, oracle.value), oracle_value=oracle.value,
        oracle_error=oracle.error_estimate, rel_discrepancy=checked_disc,
        printed_discrepancy=printed_disc,
    )
    if not oracle.converged:
        return _fail_row(entry, binding, "quadrature did not converge", **values)

    status = entry.status
    if status is Status.VERIFIED:
        if checked_disc <= rel_tol:
            verdict, reason = Verdict.PASS, ""
        else:
            verdict, reason = Verdict.FAIL, "printed form disagrees with quadrature"
    elif status is Status.CORRECTED and checked_disc > rel_tol:
        verdict, reason = Verdict.FAIL, "corrected form disagrees with quadrature"
    elif printed_disc <= rel_tol:
        verdict, reason = Verdict.FAIL, "flagged erratum not reproduced: printed form agrees"
    else:
        verdict, reason = Verdict.EXPECTED_MISMATCH, "printed form refuted"
        if status is Status.CORRECTED:
            reason += "; corrected form agrees"

    return ReportRow(
        gr_id=entry.gr_id, variant=entry.variant, binding=inst.binding, status=status,
        verdict=verdict, reason=reason, note=entry.note, **values,
    )


def _verify_or_fail(entry: CorpusEntry, binding, rel_tol: float) -> ReportRow:
    try:
        return verify_entry(entry, binding, rel_tol)
    except TrigBetaError as exc:
        return _fail_row(entry, binding, f"{entry.label}: {type(exc).__name__}: {exc}")


def run_corpus(entries: Iterable[CorpusEntry], rel_tol: float = DEFAULT_REL_TOL,
               parallelism: int = 1) -> VerificationReport:
    """Verify every entry at every binding; rows come back in a fixed order."""
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    if parallelism < 1:
        raise ValueError("parallelism must be a positive integer")
    jobs = [(e, b) for e in entries for b in e.bindings]
    start = time.perf_counter()
    if parallelism == 1 or len(jobs) < 2:
        rows = [_verify_or_fail(e, b, rel_tol) for e, b in jobs]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            rows = list(pool.map(lambda job: _verify_or_fail(job[0], job[1], rel_tol), jobs))
    rows.sort(key=_row_key)
    return VerificationReport(rows, rel_tol, wall_time=time.perf_counter() - start)
