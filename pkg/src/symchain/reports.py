"""Text and machine-readable renderings of chain runs and comparisons.

The tree form is a single JSON document per run, holding every field of
the report (the text table is a projection).  Both renderings are
byte-deterministic for identical inputs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .chain import ChainReport, Constraint
from .dirac import OracleResult, SpanVerdict


def _vec(v: Sequence[Fraction]) -> list[str]:
    return [str(x) for x in v]


def report_tree(
    report: ChainReport,
    comparison: SpanVerdict | None = None,
    oracle: OracleResult | None = None,
) -> dict:
    tree: dict = {
        "model": report.model_name,
        "zeta": list(report.zeta_names),
        "multipliers": list(report.multiplier_names),
        "constraints": [
            {
                "level": c.level,
                "expr": str(c.expr),
                "raw": str(c.raw),
                "origin": c.origin,
                "generator": _vec(c.generator) if c.generator is not None else None,
            }
            for c in report.constraints
        ],
        "eigenvectors": [
            {
                "level": rec.level,
                "truncated": rec.truncated,
                "shape": list(rec.shape),
                "candidates": [
                    {
                        "vector": _vec(cand.vector),
                        "value": str(cand.value),
                        "classification": cand.classification,
                    }
                    for cand in rec.candidates
                ],
            }
            for rec in report.levels
        ],
        "truncations": list(report.truncations),
        "termination": {
            "kind": report.termination.kind,
            "level": report.termination.level,
            "determinant": (
                str(report.termination.determinant)
                if report.termination.determinant is not None
                else None
            ),
        },
        "span_fingerprint": report.span_fingerprint(),
        "warnings": list(report.warnings),
        "comparison": None,
    }
    if comparison is not None:
        tree["comparison"] = {
            "equal": comparison.equal,
            "chain_only": [str(e) for e in comparison.only_in_first],
            "oracle_only": [str(e) for e in comparison.only_in_second],
        }
        if oracle is not None:
            tree["comparison"]["oracle_constraints"] = [
                {"level": c.level, "expr": str(c.expr), "raw": str(c.raw)}
                for c in oracle.constraints
            ]
            tree["comparison"]["multiplier_conditions"] = [
                {"constraint": str(mc.constraint.expr), "condition": str(mc.condition)}
                for mc in oracle.multiplier_conditions
            ]
    return tree


def render_tree(
    report: ChainReport,
    comparison: SpanVerdict | None = None,
    oracle: OracleResult | None = None,
) -> str:
    return json.dumps(report_tree(report, comparison, oracle), indent=2) + "\n"


def _constraint_rows(constraints: Sequence[Constraint]) -> list[tuple[str, ...]]:
    rows = [("level", "constraint", "raw", "origin", "eigenvector")]
    for c in constraints:
        vec = "(" + ", ".join(_vec(c.generator)) + ")" if c.generator is not None else "-"
        rows.append((str(c.level), str(c.expr), str(c.raw), c.origin, vec))
    return rows


def _format_table(rows: list[tuple[str, ...]]) -> list[str]:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for r, row in enumerate(rows):
        line = " | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        lines.append(line)
        if r == 0:
            lines.append("-+-".join("-" * w for w in widths))
    return lines


def render_text(
    report: ChainReport,
    comparison: SpanVerdict | None = None,
    oracle: OracleResult | None = None,
) -> str:
    lines = [f"model: {report.model_name}"]
    lines.append("phase space: " + " ".join(report.zeta_names))
    if report.constraints:
        lines.append("constraints:")
        lines.extend("  " + l for l in _format_table(_constraint_rows(report.constraints)))
    else:
        lines.append("constraints: none")
    if report.truncations:
        lines.append(
            "truncations: " + ", ".join(f"level {k}" for k in report.truncations)
        )
    lines.append("termination: " + report.termination.describe())
    for w in report.warnings:
        lines.append("warning: " + w)
    if oracle is not None:
        if oracle.constraints:
            lines.append("oracle constraints:")
            lines.extend("  " + l for l in _format_table(_oracle_rows(oracle)))
        else:
            lines.append("oracle constraints: none")
        for mc in oracle.multiplier_conditions:
            lines.append(
                f"oracle multiplier condition: consistency of {mc.constraint.expr}"
                f" requires {mc.condition} = 0"
            )
    if comparison is not None:
        lines.append("span comparison: " + comparison.describe())
    return "\n".join(lines) + "\n"


def _oracle_rows(oracle: OracleResult) -> list[tuple[str, ...]]:
    rows = [("level", "constraint", "raw", "origin")]
    for c in oracle.constraints:
        rows.append((str(c.level), str(c.expr), str(c.raw), c.origin))
    return rows
