import copy
import json

import pytest

from trigbeta import report
from trigbeta.corpus import (
    CorpusEntry,
    Status,
    Verdict,
    bundled_anchors,
    discrepancy,
    load_corpus,
    run_corpus,
    verify_entry,
)
from trigbeta.errors import CorpusError, Divergent

COVERED = {
    "3.621.1", "3.621.2", "3.621.3", "3.621.4", "3.621.5", "3.621.6", "3.621.7",
    "3.622.1", "3.623.1", "3.624.2", "3.624.3", "3.624.4", "3.624.5",
    "3.625.1", "3.625.2", "3.625.3", "3.625.4", "3.626.1", "3.626.2", "3.627", "3.628",
}


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


@pytest.fixture(scope="module")
def default_report(corpus):
    return run_corpus(corpus, 1e-10, 1)


def entry(corpus, gr_id, variant=""):
    return next(e for e in corpus if e.gr_id == gr_id and e.variant == variant)


def doc_with(*entries):
    return {"entries": list(entries)}


def simple(**overrides):
    base = {
        "gr_id": "9.999", "paper_anchor": "anchor", "interval": "pi/2",
        "integrand": "int[0,pi/2] sin(x) dx",
        "expected_form": {"op": "const", "value": 1},
        "status": "verified", "note": "",
    }
    base.update(overrides)
    return base


# -- loading ---------------------------------------------------------------------


def test_default_corpus_coverage(corpus):
    assert len(corpus) >= 22
    assert {e.gr_id for e in corpus} == COVERED
    assert {e.variant for e in corpus if e.gr_id == "3.627"} == {"tan", "cot"}
    assert all(isinstance(e, CorpusEntry) for e in corpus)


def test_parametric_entries_have_three_bindings(corpus):
    for e in corpus:
        if e.params:
            assert len(e.bindings) >= 3, e.label
            assert all(type(v) is int for b in e.bindings for v in b)


def test_status_invariants(corpus):
    for e in corpus:
        if e.status is not Status.VERIFIED:
            assert e.note
        if e.status is Status.CORRECTED:
            assert e.corrected_form is not None


def test_half_integer_note_on_binomial_entries(corpus):
    for gr_id in ("3.621.3", "3.621.4"):
        notes = " ".join(e.note for e in corpus if e.gr_id == gr_id)
        assert "sqrt(pi)" in notes


def test_anchors_are_in_bundled_list(corpus):
    anchors = set(bundled_anchors())
    for e in corpus:
        assert e.paper_anchor in anchors, e.label


def test_load_from_path_and_dict(tmp_path, corpus):
    from importlib import resources

    text = resources.files("trigbeta").joinpath("data/corpus.json").read_text(encoding="utf-8")
    path = tmp_path / "c.json"
    path.write_text(text, encoding="utf-8")
    assert [e.label for e in load_corpus(path)] == [e.label for e in corpus]
    assert [e.label for e in load_corpus(str(path))] == [e.label for e in corpus]
    assert len(load_corpus(json.loads(text))) == len(corpus)


def test_duplicate_binding_rejected():
    tpl = {"template": {"alpha": "n", "beta": "0", "gamma": "0"}, "params": ["n"], "bindings": [[1], [2]]}
    e = simple(integrand=tpl, expected_form={"op": "const", "value": 1})
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(doc_with(e, copy.deepcopy(e)))
    e2 = simple(integrand={**tpl, "bindings": [[1], [1]]})
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(doc_with(e2))


def test_half_pi_cos2x_surfaces_with_gr_id():
    e = simple(gr_id="3.777", integrand="int[0,pi/2] cos(2x) dx")
    with pytest.raises(CorpusError, match="3.777") as info:
        load_corpus(doc_with(e))
    assert "cos(2x) on half-pi interval" in str(info.value)


@pytest.mark.parametrize("mutate,match", [
    (lambda e: e.pop("gr_id"), "entry 1: missing field 'gr_id'"),
    (lambda e: e.update(status="bogus"), "entry 1"),
    (lambda e: e.update(interval="pi/3"), "entry 1"),
    (lambda e: e.update(status="erratum_suspected"), "needs a note"),
    (lambda e: e.update(status="corrected", note="x"), "corrected_form"),
    (lambda e: e.update(integrand=42), "integrand must be"),
    (lambda e: e.update(integrand={"template": {"alpha": "n"}, "params": ["n"], "bindings": [[1]]}), "template needs"),
    (lambda e: e.update(integrand={"template": {"alpha": "n", "beta": "0", "gamma": "0"}, "params": ["n"], "bindings": [[1, 2]]}), "does not match"),
    (lambda e: e.update(integrand={"template": {"alpha": "n", "beta": "0", "gamma": "0"}, "params": ["n"], "bindings": [[0.5]]}), "does not match"),
    (lambda e: e.update(expected_form={"op": "gamma", "arg": 0}), "9.999"),
    (lambda e: e.update(integrand="int[0,pi/4] sin(x) dx"), "interval"),
    (lambda e: e.update(integrand="int[0,pi/2] sin(x dx"), "does not parse"),
])
def test_schema_errors_carry_context(mutate, match):
    good = simple(gr_id="9.000")
    bad = simple()
    mutate(bad)
    with pytest.raises(CorpusError, match=match):
        load_corpus(doc_with(good, bad))


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(CorpusError):
        load_corpus(bad)
    with pytest.raises(CorpusError):
        load_corpus({"rows": []})


# -- verify_entry ------------------------------------------------------------------


def test_verify_inverse_sqrt_sin(corpus):
    row = verify_entry(entry(corpus, "3.621.7"), (), 1e-10)
    assert row.verdict is Verdict.PASS
    assert row.rel_discrepancy <= 1e-10
    assert row.closed_value == pytest.approx(2.6220575543, rel=1e-10)


def test_verify_sqrt_sin_erratum(corpus):
    row = verify_entry(entry(corpus, "3.621.6"), (), 1e-10)
    assert row.verdict is Verdict.EXPECTED_MISMATCH
    assert row.closed_value == pytest.approx(10.4882, rel=1e-4)
    assert row.oracle_value == pytest.approx(1.1981402, rel=1e-7)
    assert row.corrected_value == pytest.approx(row.oracle_value, rel=1e-10)
    assert row.rel_discrepancy <= 1e-10
    assert row.printed_discrepancy == pytest.approx(7.75, abs=0.01)


def test_verify_binomial_form_one_third(corpus):
    for variant in ("beta", "binomial"):
        row = verify_entry(entry(corpus, "3.625.3", variant), (1, 1), 1e-10)
        assert row.verdict is Verdict.PASS
        assert row.closed_value == pytest.approx(1 / 3, rel=1e-14)


def test_verify_factorial_erratum_is_factor_two(corpus):
    e = entry(corpus, "3.626.1", "factorial")
    for b in e.bindings:
        row = verify_entry(e, b, 1e-10)
        assert row.verdict is Verdict.EXPECTED_MISMATCH
        assert row.closed_value == pytest.approx(2 * row.oracle_value, rel=1e-12)


def test_verify_propagates_divergence_with_gr_id():
    e = load_corpus(doc_with(simple(gr_id="8.1", integrand="int[0,pi/2] sin(x)^(-1) dx")))[0]
    with pytest.raises(Divergent) as info:
        verify_entry(e, (), 1e-10)
    assert info.value.gr_id == "8.1"


def test_erratum_suspected_semantics():
    wrong = simple(status="erratum_suspected", note="suspect", expected_form={"op": "const", "value": 2})
    right = simple(gr_id="9.998", status="erratum_suspected", note="suspect")
    rows = run_corpus(load_corpus(doc_with(wrong, right)), 1e-10).rows
    verdicts = {r.gr_id: r.verdict for r in rows}
    assert verdicts["9.999"] is Verdict.EXPECTED_MISMATCH
    # a flagged entry whose printed form agrees is not silently accepted
    assert verdicts["9.998"] is Verdict.FAIL


def test_corrected_form_must_agree():
    e = simple(status="corrected", note="n", expected_form={"op": "const", "value": 2},
               corrected_form={"op": "const", "value": 3})
    row = run_corpus(load_corpus(doc_with(e)), 1e-10).rows[0]
    assert row.verdict is Verdict.FAIL
    assert "corrected form" in row.reason


def test_verified_wrong_entry_fails():
    row = run_corpus(load_corpus(doc_with(simple(expected_form={"op": "const", "value": 2}))), 1e-10).rows[0]
    assert row.verdict is Verdict.FAIL
    assert row.rel_discrepancy == pytest.approx(1.0)


def test_discrepancy_floor():
    assert discrepancy(1e-3, 2e-3) == pytest.approx(1e-3)
    assert discrepancy(110.0, 100.0) == pytest.approx(0.1)


# -- run_corpus --------------------------------------------------------------------


def test_default_run(default_report, corpus):
    assert default_report.n_fail == 0
    flagged_rows = sum(len(e.bindings) for e in corpus if e.status is not Status.VERIFIED)
    assert default_report.n_expected_mismatch == flagged_rows >= 1
    assert default_report.n_pass + default_report.n_expected_mismatch == len(default_report.rows)
    for row in default_report.rows:
        if row.status is Status.VERIFIED:
            assert row.verdict is Verdict.PASS
            assert row.rel_discrepancy <= 1e-10
        else:
            assert row.verdict is Verdict.EXPECTED_MISMATCH


def test_engine_reduction_agrees_on_every_row(default_report):
    for row in default_report.rows:
        assert row.engine_discrepancy <= 1e-10, row.label


def test_rows_sorted_by_gr_id_then_binding(default_report):
    keys = [(tuple(int(p) for p in r.gr_id.split(".")), r.variant, tuple(v for _, v in r.binding))
            for r in default_report.rows]
    assert keys == sorted(keys)


def test_empty_run():
    rep = run_corpus([], 1e-10, 4)
    assert rep.rows == []
    assert rep.counts == {"pass": 0, "fail": 0, "expected_mismatch": 0}


def test_tolerance_below_oracle_accuracy(corpus):
    rep = run_corpus(corpus, 1e-16, 2)
    fails = [r for r in rep.rows if r.verdict is Verdict.FAIL]
    assert fails
    assert all(1e-16 < r.rel_discrepancy <= 1e-10 for r in fails)


def test_run_rejects_bad_arguments(corpus):
    with pytest.raises(ValueError):
        run_corpus(corpus, 0.0)
    with pytest.raises(ValueError):
        run_corpus(corpus, 1e-10, 0)


def test_run_turns_errors_into_fail_rows():
    docs = doc_with(simple(gr_id="8.1", integrand="int[0,pi/2] sin(x)^(-1) dx"), simple())
    rep = run_corpus(load_corpus(docs), 1e-10, 2)
    bad = next(r for r in rep.rows if r.gr_id == "8.1")
    assert bad.verdict is Verdict.FAIL
    assert "Divergent" in bad.reason and "8.1" in bad.reason
    assert rep.n_pass == 1


def test_parallel_runs_are_identical(corpus, default_report):
    par = run_corpus(corpus, 1e-10, 8)
    for render in (report.render_text, report.render_markdown):
        assert render(par) == render(default_report)
    assert report.render_json(par, wall_time=False) == report.render_json(default_report, wall_time=False)


# -- report renderers ----------------------------------------------------------------


def test_markdown_report(default_report):
    md = report.render_markdown(default_report)
    lines = md.splitlines()
    assert lines[0].startswith("| GR entry |")
    body = [l for l in lines[2:] if l.startswith("| 3.")]
    assert len(body) == len(default_report.rows)
    mismatch = [l for l in body if "expected_mismatch" in l]
    assert mismatch and all("printed form refuted" in l for l in mismatch)
    assert any("Gamma(3/4)" in l for l in mismatch if l.startswith("| 3.621.6 "))


def test_json_report_mirrors_rows(default_report):
    doc = json.loads(report.render_json(default_report))
    assert doc["counts"] == default_report.counts
    assert len(doc["rows"]) == len(default_report.rows)
    first = doc["rows"][0]
    for key in ("closed_value", "oracle_value", "oracle_error", "rel_discrepancy", "verdict"):
        assert key in first
    assert "wall_time" in doc
    assert "wall_time" not in json.loads(report.render_json(default_report, wall_time=False))


def test_text_report_summary(default_report):
    text = report.render_text(default_report)
    assert text.splitlines()[-1].endswith(
        f"{default_report.n_pass} pass, 0 fail, {default_report.n_expected_mismatch} expected mismatch"
    )
    assert "wall" not in text
