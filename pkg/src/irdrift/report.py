"""Deterministic rendering of change matrices and diff summaries.

Output is byte-stable across runs and platforms: fixed column order,
reals printed with a fixed number of decimal places (round-half-even) in
CSV and Markdown, UTF-8, LF line endings. JSON output keeps full float
precision so it parses back to exactly the rendered matrix.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum

from .diff import ChangeSummary, ComponentDiff
from .model import MeasureSpec


class Scenario(Enum):
    """Which components changed between the compared environments: only the
    documents (rank- and score-drift measures apply, one shared recall
    base), or documents and qrels together (ARP-level measures apply)."""

    DTQ = "dtq"
    DTQ_PRIME = "dtq-prime"


@dataclass(frozen=True)
class ChangeReport:
    """One system x environment cell set of a longitudinal result matrix.

    Document-only rows carry rank overlap and score RMSE; rows that also
    track qrels changes carry ARP, the relative ARP delta, the
    pivot-relative margin shift, and significance flags. ``None`` values
    render as empty cells (e.g. the margin shift for the pivot system
    itself, which has no pivot to compare against).
    """

    system_tag: str
    ee_label: str
    scenario: Scenario
    rbo_mean: float | None = None
    rmse: dict[MeasureSpec, float] = field(default_factory=dict)
    arp: dict[MeasureSpec, float] = field(default_factory=dict)
    re_delta: dict[MeasureSpec, float] = field(default_factory=dict)
    delta_ri: dict[MeasureSpec, float | None] = field(default_factory=dict)
    significant: dict[MeasureSpec, bool | None] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.scenario is Scenario.DTQ_PRIME and (
            self.rbo_mean is not None or self.rmse
        ):
            raise ValueError(
                "rank overlap and RMSE belong to document-only rows; qrels-change "
                "rows compare against a moving recall base"
            )


@dataclass(frozen=True)
class LongitudinalMatrix:
    """Ordered report rows: system tags ascending, then environment order."""

    collection_label: str
    rows: tuple[ChangeReport, ...]

    def __post_init__(self) -> None:
        blocks: dict[str, list[str]] = {}
        order: list[str] = []
        for row in self.rows:
            if row.system_tag not in blocks:
                blocks[row.system_tag] = []
                order.append(row.system_tag)
            elif order[-1] != row.system_tag:
                raise ValueError(
                    f"rows of system {row.system_tag!r} are not contiguous"
                )
            blocks[row.system_tag].append(row.ee_label)
        if order != sorted(order):
            raise ValueError("system blocks must be ordered by ascending tag")
        sequences = {tuple(labels) for labels in blocks.values()}
        if len(sequences) > 1:
            raise ValueError("every system must report the same environment sequence")

    def measures(self) -> list[MeasureSpec]:
        """All measures any row mentions, ordered by canonical name."""
        found: set[MeasureSpec] = set()
        for row in self.rows:
            found.update(row.rmse, row.arp, row.re_delta, row.delta_ri, row.significant)
        return sorted(found, key=lambda m: m.name)


def _fmt_real(value: float | None, places: int) -> str:
    if value is None:
        return ""
    if value == 0.0:
        value = 0.0  # fold -0.0
    return format(value, f".{places}f")


def _fmt_flag(value: bool | None) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def _matrix_cells(
    matrix: LongitudinalMatrix, places: int
) -> tuple[list[str], list[list[str]]]:
    measures = matrix.measures()
    header = ["collection", "system", "ee", "scenario", "rbo_mean"]
    for m in measures:
        header += [
            f"arp_{m.name}",
            f"rmse_{m.name}",
            f"re_delta_{m.name}",
            f"delta_ri_{m.name}",
            f"significant_{m.name}",
        ]
    rows: list[list[str]] = []
    for row in matrix.rows:
        cells = [
            matrix.collection_label,
            row.system_tag,
            row.ee_label,
            row.scenario.value,
            _fmt_real(row.rbo_mean, places),
        ]
        for m in measures:
            cells += [
                _fmt_real(row.arp.get(m), places),
                _fmt_real(row.rmse.get(m), places),
                _fmt_real(row.re_delta.get(m), places),
                _fmt_real(row.delta_ri.get(m), places),
                _fmt_flag(row.significant.get(m)),
            ]
        rows.append(cells)
    return header, rows


def _render_csv(header: list[str], rows: list[list[str]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode("utf-8")


def _render_markdown(header: list[str], rows: list[list[str]]) -> bytes:
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for cells in rows:
        lines.append("| " + " | ".join(cells) + " |")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _measure_map(values: dict, convert) -> dict[str, object]:
    return {m.name: convert(v) for m, v in sorted(values.items(), key=lambda kv: kv[0].name)}


def render(matrix: LongitudinalMatrix, format: str, places: int = 4) -> bytes:
    """Serialize a matrix as csv, markdown, or json bytes."""
    if format == "json":
        doc = {
            "collection": matrix.collection_label,
            "rows": [
                {
                    "system": row.system_tag,
                    "ee": row.ee_label,
                    "scenario": row.scenario.value,
                    "rbo_mean": row.rbo_mean,
                    "rmse": _measure_map(row.rmse, lambda v: v),
                    "arp": _measure_map(row.arp, lambda v: v),
                    "re_delta": _measure_map(row.re_delta, lambda v: v),
                    "delta_ri": _measure_map(row.delta_ri, lambda v: v),
                    "significant": _measure_map(row.significant, lambda v: v),
                }
                for row in matrix.rows
            ],
        }
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    header, rows = _matrix_cells(matrix, places)
    if format == "csv":
        return _render_csv(header, rows)
    if format == "markdown":
        return _render_markdown(header, rows)
    raise ValueError(f"unknown format {format!r} (expected csv, markdown, or json)")


def render_table(header: list[str], rows: list[list[str]], format: str) -> bytes:
    """Render a plain header-plus-rows table as csv, markdown, or json records."""
    if format == "csv":
        return _render_csv(header, rows)
    if format == "markdown":
        return _render_markdown(header, rows)
    if format == "json":
        doc = [dict(zip(header, cells)) for cells in rows]
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {format!r} (expected csv, markdown, or json)")


def matrix_from_json(data: bytes | str) -> LongitudinalMatrix:
    """Parse :func:`render`'s json output back into a matrix."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    doc = json.loads(data)
    rows = []
    for row in doc["rows"]:
        rows.append(
            ChangeReport(
                system_tag=row["system"],
                ee_label=row["ee"],
                scenario=Scenario(row["scenario"]),
                rbo_mean=row["rbo_mean"],
                rmse={MeasureSpec.parse(k): v for k, v in row["rmse"].items()},
                arp={MeasureSpec.parse(k): v for k, v in row["arp"].items()},
                re_delta={MeasureSpec.parse(k): v for k, v in row["re_delta"].items()},
                delta_ri={MeasureSpec.parse(k): v for k, v in row["delta_ri"].items()},
                significant={
                    MeasureSpec.parse(k): v for k, v in row["significant"].items()
                },
            )
        )
    return LongitudinalMatrix(collection_label=doc["collection"], rows=tuple(rows))


def _summary_cells(summary: ChangeSummary, places: int) -> list[list[str]]:
    def row(name: str, diff: ComponentDiff) -> list[str]:
        return [
            name,
            str(diff.total_from),
            str(diff.total_to),
            _fmt_real(diff.relative_delta * 100.0, places),
            str(len(diff.created)),
            str(len(diff.updated)),
            str(len(diff.deleted)),
        ]

    return [
        row("documents", summary.documents),
        row("topics", summary.topics),
        row("qrels", summary.qrels),
    ]


_SUMMARY_HEADER = [
    "component",
    "total_from",
    "total_to",
    "delta_pct",
    "created",
    "updated",
    "deleted",
]


def render_change_summary(
    summary: ChangeSummary, format: str, places: int = 4
) -> bytes:
    """Serialize a diff summary as csv, markdown, or json bytes."""
    if format == "json":
        def component(diff: ComponentDiff) -> dict[str, object]:
            return {
                "total_from": diff.total_from,
                "total_to": diff.total_to,
                "relative_delta": diff.relative_delta,
                "created": len(diff.created),
                "updated": len(diff.updated),
                "deleted": len(diff.deleted),
            }

        doc = {
            "from": summary.from_label,
            "to": summary.to_label,
            "documents": component(summary.documents),
            "topics": component(summary.topics),
            "qrels": component(summary.qrels),
        }
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    rows = _summary_cells(summary, places)
    if format == "csv":
        return _render_csv(_SUMMARY_HEADER, rows)
    if format == "markdown":
        header = list(_SUMMARY_HEADER)
        md_rows = [list(cells) for cells in rows]
        for cells in md_rows:
            cells[3] = cells[3] + "%"
        return _render_markdown(header, md_rows)
    raise ValueError(f"unknown format {format!r} (expected csv, markdown, or json)")
