"""Text, Markdown and JSON renderings of a :class:`VerificationReport`.

Every renderer returns the report body only.  Wall time varies between runs,
so it is kept out of the body and rendered separately by :func:`timing_line`.
"""

from __future__ import annotations

import json

from .corpus import ReportRow, Verdict, VerificationReport


def _num(x, fmt=".12g") -> str:
    return "-" if x is None else format(x, fmt)


def _summary(report: VerificationReport) -> str:
    c = report.counts
    return (
        f"{len(report.rows)} rows at rel_tol {report.rel_tol:g}: "
        f"{c['pass']} pass, {c['fail']} fail, {c['expected_mismatch']} expected mismatch"
    )


def render_text(report: VerificationReport) -> str:
    lines = []
    for row in report.rows:
        head = f"{row.label:<26} {row.binding_text:<12} {row.verdict.value:<17}"
        lines.append(
            f"{head} closed={_num(row.closed_value)} oracle={_num(row.oracle_value)} "
            f"rel={_num(row.rel_discrepancy, '.2e')}"
        )
        if row.verdict is not Verdict.PASS:
            lines.append(f"    printed discrepancy {_num(row.printed_discrepancy, '.3g')}; {row.reason}")
            if row.note:
                lines.append(f"    note: {row.note}")
    lines.append(_summary(report))
    return "\n".join(lines) + "\n"


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def render_markdown(report: VerificationReport) -> str:
    lines = [
        "| GR entry | binding | integrand | closed | oracle | oracle err | rel discrepancy | printed discrepancy | verdict | notes |",
        "|---|---|---|---|---|---|---|---|---|---|",
    ]
    for row in report.rows:
        notes = ""
        if row.verdict is not Verdict.PASS:
            notes = "; ".join(p for p in (row.reason, row.note) if p)
        cells = [
            row.label, row.binding_text, f"`{row.integrand}`" if row.integrand else "",
            _num(row.closed_value), _num(row.oracle_value), _num(row.oracle_error, ".1e"),
            _num(row.rel_discrepancy, ".2e"), _num(row.printed_discrepancy, ".3g"),
            row.verdict.value, notes,
        ]
        lines.append("| " + " | ".join(_md_cell(c) for c in cells) + " |")
    lines.append("")
    lines.append(f"**Summary:** {_summary(report)}")
    return "\n".join(lines) + "\n"


def row_to_json(row: ReportRow) -> dict:
    return {
        "gr_id": row.gr_id,
        "variant": row.variant,
        "binding": dict(row.binding),
        "status": row.status.value,
        "integrand": row.integrand,
        "expected_form": row.expected_text,
        "closed_value": row.closed_value,
        "corrected_value": row.corrected_value,
        "engine_value": row.engine_value,
        "engine_discrepancy": row.engine_discrepancy,
        "oracle_value": row.oracle_value,
        "oracle_error": row.oracle_error,
        "rel_discrepancy": row.rel_discrepancy,
        "printed_discrepancy": row.printed_discrepancy,
        "verdict": row.verdict.value,
        "reason": row.reason,
        "note": row.note,
    }


def report_to_json(report: VerificationReport, wall_time: bool = True) -> dict:
    doc = {
        "rel_tol": report.rel_tol,
        "counts": dict(report.counts),
        "rows": [row_to_json(r) for r in report.rows],
    }
    if wall_time:
        doc["wall_time"] = report.wall_time
    return doc


def render_json(report: VerificationReport, wall_time: bool = True) -> str:
    return json.dumps(report_to_json(report, wall_time), indent=2, ensure_ascii=False) + "\n"


def timing_line(report: VerificationReport) -> str:
    return f"wall time {report.wall_time:.3f} s\n"
