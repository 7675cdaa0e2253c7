# result_aggregator.py - Summaries and text/csv/json rendering of census tables, indices and check results

import csv
import io
import json
import logging
import time
from typing import Any, Dict, List, Sequence

from models import (
    AtlasRecord, CensusRegime, CensusTable, CheckResult, CheckStatus, CycleIndex, VerificationReport
)
from cycle_index import cycle_index_to_dict, format_cycle_index

logger = logging.getLogger(__name__)

CENSUS_COLUMNS = ["n", "k", "A", "H", "F", "regime", "provenance"]


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _cell(value: Any) -> str:
    return "?" if value is None else str(value)


# --- Census Tables ---

def summarize_census(table: CensusTable) -> Dict[str, Any]:
    """
    Counts rows per regime and totals the known columns.
    (Pure Function)
    """
    by_regime = {r.value: 0 for r in CensusRegime}
    for row in table.rows:
        by_regime[row.regime.value] += 1
    known = [r for r in table.rows if r.F is not None]
    return {
        "n": table.n,
        "rows": len(table.rows),
        "rows_by_regime": {k: v for k, v in by_regime.items() if v},
        "total_A": sum(r.A for r in table.rows),
        "total_F_known": sum(r.F for r in known),
        "unknown_ks": [r.k for r in table.rows if r.F is None],
    }


def _hyperplane_keys(table: CensusTable) -> List[str]:
    keys: List[str] = []
    for row in table.rows:
        for key in row.per_hyperplane:
            if key not in keys:
                keys.append(key)
    return keys


def render_census(table: CensusTable, output_format: str = "text", per_hyperplane: bool = False) -> str:
    """Deterministic rendering; nothing time-dependent reaches the output."""
    keys = _hyperplane_keys(table) if per_hyperplane else []
    if output_format == "json":
        exclude = {"n"} if per_hyperplane else {"n", "per_hyperplane"}
        payload = {
            "n": table.n,
            "summary": summarize_census(table),
            "rows": [row.model_dump(mode="json", exclude=exclude) for row in table.rows],
        }
        return json.dumps(payload, indent=2)

    header = CENSUS_COLUMNS + [f"N[{key}]" for key in keys]
    rows = [
        [row.n, row.k, row.A, _cell(row.H), _cell(row.F), row.regime.value, row.provenance]
        + [_cell(row.per_hyperplane.get(key)) if row.per_hyperplane else "" for key in keys]
        for row in table.rows
    ]
    if output_format == "csv":
        return _csv(header, rows)

    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    summary = summarize_census(table)
    lines.append("")
    lines.append(f"# {summary['rows']} rows, {summary['rows_by_regime']}")
    if summary["unknown_ks"]:
        lines.append(f"# unknown k: {','.join(map(str, summary['unknown_ks']))}")
    return "\n".join(lines)


# --- Cycle Indices and Atlases ---

def render_cycle_index(Z: CycleIndex, label: str, output_format: str = "text") -> str:
    if output_format == "json":
        return json.dumps({"label": label, "group_order": Z.group_order, "terms": cycle_index_to_dict(Z)}, indent=2)
    if output_format == "csv":
        return _csv(["monomial", "coefficient"], list(cycle_index_to_dict(Z).items()))
    order = f" (|G|={Z.group_order})" if Z.group_order else ""
    return f"# {label}{order}\n{format_cycle_index(Z)}"


def render_atlas(records: Sequence[AtlasRecord], text: str, output_format: str = "text") -> str:
    """`text` is the atlas-file rendering of the same records."""
    if output_format == "json":
        return json.dumps([r.model_dump(mode="json") for r in records], indent=2)
    if output_format == "csv":
        return _csv(
            ["label", "n", "coeffs", "rhs", "alpha", "delta", "vertices", "stabilizer"],
            [[r.label, r.hyperplane.n, " ".join(map(str, r.hyperplane.coeffs)), r.hyperplane.rhs,
              str(r.alpha), r.delta, r.vertices, r.stabilizer] for r in records],
        )
    return text


# --- Verification Reports ---

def aggregate_verification(checks: List[CheckResult], start_timestamp: float) -> VerificationReport:
    """
    Folds individual check results into a report with per-status and per-suite counts.
    (Pure Function apart from reading the clock)
    """
    logger.info(f"Aggregating {len(checks)} check results...")
    by_status = {s.value: 0 for s in CheckStatus}
    by_suite: Dict[str, Dict[str, int]] = {}
    for check in checks:
        by_status[check.status.value] += 1
        suite = by_suite.setdefault(check.suite, {s.value: 0 for s in CheckStatus})
        suite[check.status.value] += 1

    summary = {
        "checks": len(checks),
        "by_status": by_status,
        "by_suite": by_suite,
        "total_seconds": round(time.time() - start_timestamp, 2),
    }
    report = VerificationReport(summary=summary, checks=checks)
    logger.info(
        f"Verification complete: {by_status['passed']} passed, {by_status['failed']} failed, "
        f"{by_status['noted']} noted, {by_status['error']} errors."
    )
    return report


def render_verification(report: VerificationReport, output_format: str = "text") -> str:
    """Timings and timestamps stay out of the rendering so repeated runs print identical bytes."""
    stable = {k: v for k, v in report.summary.items() if k != "total_seconds"}
    checks = [c.model_dump(mode="json", exclude={"duration_seconds", "checked_at"}) for c in report.checks]
    if output_format == "json":
        return json.dumps({"summary": stable, "checks": checks}, indent=2)
    if output_format == "csv":
        return _csv(
            ["suite", "name", "status", "expected", "computed", "detail"],
            [[c["suite"], c["name"], c["status"], _cell(c["expected"]), _cell(c["computed"]), c["detail"] or ""]
             for c in checks],
        )
    lines = []
    for c in report.checks:
        line = f"[{c.status.value.upper():6}] {c.suite}/{c.name}"
        if c.status is not CheckStatus.PASSED:
            line += f": expected {_cell(c.expected)}, computed {_cell(c.computed)}"
            if c.detail:
                line += f" ({c.detail})"
        lines.append(line)
    counts = stable["by_status"]
    lines.append("")
    lines.append(
        f"{stable['checks']} checks: {counts['passed']} passed, {counts['failed']} failed, "
        f"{counts['noted']} noted, {counts['error']} errors"
    )
    return "\n".join(lines)
