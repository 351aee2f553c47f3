"""Result tables and the pass/fail comparison report."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .runner import CaseResult

TOLERANCE_PROFILES = {
    # relative tolerances per quantity kind; per-quantity overrides apply on "paper"
    "paper": {"w": 0.005, "sxx": 0.01, "syy": 0.01, "txz": 0.02, "omega": 0.005},
    "strict": {"w": 0.001, "sxx": 0.002, "syy": 0.002, "txz": 0.005, "omega": 0.001},
}
KIND_ORDER = ("w", "sxx", "syy", "txz", "omega")


def fmt_value(v: float | None) -> str:
    return "-" if v is None else f"{v:.4f}"


def fmt_pct(v: float | None) -> str:
    return "-" if v is None else f"{100.0 * v:.2f}%"


def _grid(results: list[CaseResult]):
    columns: list[str] = []
    rows: dict[tuple, dict[str, tuple]] = {}
    for r in results:
        col = r.spec.column or r.name
        if col not in columns:
            columns.append(col)
        for q in r.quantities:
            key = (q.name, r.spec.row or r.name, KIND_ORDER.index(q.kind))
            rows.setdefault(key, {})[col] = (q.value, q.reference, q.deviation)
    # methods keep their first-seen order inside each quantity
    seen = {}
    for r in results:
        seen.setdefault(r.spec.row or r.name, len(seen))
    ordered = sorted(rows, key=lambda k: (k[2], k[0], seen.get(k[1], 0)))
    return columns, [(k[0], k[1], rows[k]) for k in ordered]


def emit_table(results: list[CaseResult], fmt: str = "csv") -> str:
    """One benchmark table in published layout: rows are (quantity, method), columns the swept parameter.

    Each column contributes computed value, reference and relative deviation.
    """
    columns, rows = _grid(results)
    header = ["quantity", "method"]
    for c in columns:
        header += [c, f"{c} ref", f"{c} dev"]
    body = []
    for name, method, cells in rows:
        line = [name, method]
        for c in columns:
            value, ref, dev = cells.get(c, (None, None, None))
            line += [fmt_value(value), fmt_value(ref), fmt_pct(dev)]
        body.append(line)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()
    if fmt == "md":
        out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        out += ["| " + " | ".join(line) + " |" for line in body]
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def case_csv(result: CaseResult, profile: str = "paper") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["case", "quantity", "kind", "computed", "reference", "citation",
                     "deviation", "tolerance", "status"])
    for q, tol, status in _checks(result, profile):
        writer.writerow([result.name, q.name, q.kind, f"{q.value:.6f}", fmt_value(q.reference),
                         q.citation, fmt_pct(q.deviation), fmt_pct(tol), status])
    return buf.getvalue()


def _tolerance(q, profile: str) -> float:
    table = TOLERANCE_PROFILES[profile]
    if profile == "paper" and q.tolerance is not None:
        return q.tolerance
    return table[q.kind]


def _checks(result: CaseResult, profile: str):
    for q in result.quantities:
        tol = _tolerance(q, profile)
        if q.reference is None:
            yield q, tol, "unchecked"
        else:
            yield q, tol, "pass" if q.deviation <= tol else "fail"


@dataclass
class ComparisonReport:
    lines: list[str]
    failures: list[tuple[str, str, float, float]]
    unchecked: list[tuple[str, str]]
    n_checked: int

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def compare(results: list[CaseResult], profile: str = "paper") -> ComparisonReport:
    """Check every referenced quantity against its tolerance.

    Quantities without a published reference are listed as unchecked and do
    not fail the run.
    """
    if profile not in TOLERANCE_PROFILES:
        raise ValueError(f"unknown tolerance profile {profile!r}")
    lines, failures, unchecked = [], [], []
    n_checked = 0
    for r in results:
        for q, tol, status in _checks(r, profile):
            if status == "unchecked":
                unchecked.append((r.name, q.name))
            else:
                n_checked += 1
                if status == "fail":
                    failures.append((r.name, q.name, q.deviation, tol))
            lines.append(f"{status.upper():9s} {r.name:28s} {q.name:14s} computed={q.value:.4f} "
                         f"reference={fmt_value(q.reference)} dev={fmt_pct(q.deviation)} tol={fmt_pct(tol)}")
    summary = [f"profile: {profile}", f"checked: {n_checked}, failed: {len(failures)}, unchecked: {len(unchecked)}"]
    if failures:
        summary.append("worst offenders:")
        for case, name, dev, tol in sorted(failures, key=lambda f: -f[2] / f[3])[:10]:
            summary.append(f"  {case} {name}: {fmt_pct(dev)} > {fmt_pct(tol)}")
    return ComparisonReport(summary + [""] + lines, failures, unchecked, n_checked)


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_outputs(results: list[CaseResult], out: Path, fmt: str = "csv", profile: str = "paper") -> ComparisonReport:
    """Per-case CSV, per-table files and the aggregate report under ``out``."""
    for r in results:
        write_atomic(out / "cases" / f"{r.name}.csv", case_csv(r, profile))
        write_atomic(out / "cases" / f"{r.name}.json", json.dumps(
            {"spec": r.spec.to_dict(), "metadata": r.metadata,
             "quantities": [{"name": q.name, "kind": q.kind, "value": q.value,
                             "reference": q.reference, "deviation": q.deviation} for q in r.quantities]},
            indent=2, sort_keys=True, default=float))
    tables: dict[str, list[CaseResult]] = {}
    for r in results:
        tables.setdefault(r.spec.table or "custom", []).append(r)
    for table, rs in tables.items():
        write_atomic(out / "tables" / f"{table}.{fmt}", emit_table(rs, fmt))
    report = compare(results, profile)
    write_atomic(out / "report.txt", report.text())
    timing = "\n".join(f"{r.name},{r.runtime:.3f}" for r in results)
    write_atomic(out / "timing.csv", "case,seconds\n" + timing + "\n")
    return report
