"""
レポートの出力形式

json はスキーマに従い往復可能、csv は評価 1 件を 1 行に平坦化、
text は人が読むための要約です。
"""

import csv
import io
from typing import Union

from pydantic import ValidationError

from slp_lab.errors import InvalidInputError
from slp_lab.schema import Report

FORMATS = ("text", "json", "csv")

CSV_COLUMNS = [
    "label", "p_value", "p_value_exact", "distribution_used", "model", "outcome", "flags", "trace",
]


def _to_json(report: Report) -> str:
    return report.model_dump_json(indent=2) + "\n"


def _to_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for record in report.assessments:
        writer.writerow({
            "label": record.label,
            "p_value": repr(record.p_value),
            "p_value_exact": record.p_value_exact or "",
            "distribution_used": record.distribution_used,
            "model": record.model or "",
            "outcome": record.outcome or "",
            "flags": ";".join(record.flags),
            "trace": record.trace,
        })
    return buffer.getvalue()


def _to_text(report: Report) -> str:
    lines = [f"demo: {report.demo_name} (schema {report.schema_version})"]
    if report.inputs:
        lines.append("inputs:")
        lines.extend(f"  {key} = {value}" for key, value in report.inputs.items())
    if report.assessments:
        lines.append("assessments:")
        for record in report.assessments:
            exact = f" = {record.p_value_exact}" if record.p_value_exact else ""
            flags = f" [{', '.join(record.flags)}]" if record.flags else ""
            lines.append(f"  {record.label}: p = {record.p_value:.6g}{exact} ({record.distribution_used}){flags}")
    for verdict in report.verdicts:
        lines.append(
            f"audit {verdict.premise1_semantics},{verdict.premise2_semantics},{verdict.evaluation_order}: "
            f"P1={verdict.premise1.holds} P2={verdict.premise2.holds} "
            f"C={verdict.conclusion.holds} -> {verdict.verdict}"
        )
        for part in (verdict.premise1, verdict.premise2, verdict.conclusion):
            for witness in part.witnesses:
                lines.append(f"    {witness.label}: {witness.left.p_value:.6g} vs "
                             f"{witness.right.p_value:.6g} (gap {witness.gap:.3g})")
    for study in report.studies:
        lines.append(f"study {study.label}: {study.n_replications} paths, n_max={study.n_max}, "
                     f"stopped {study.final_fraction:.4f} +/- {study.standard_error:.4f} ({study.oracle})")
    if report.findings:
        lines.append("findings:")
        lines.extend(f"  {finding.name}: {finding.value} ({finding.tag})" for finding in report.findings)
    return "\n".join(lines) + "\n"


def serialize(report: Report, fmt: str = "json") -> bytes:
    """
    レポートをバイト列に変換する（UTF-8）

    Raises:
        InvalidInputError: 未対応の形式
    """
    if fmt == "json":
        text = _to_json(report)
    elif fmt == "csv":
        text = _to_csv(report)
    elif fmt == "text":
        text = _to_text(report)
    else:
        raise InvalidInputError(f"Unsupported format {fmt!r}; choose one of {', '.join(FORMATS)}")
    return text.encode("utf-8")


def parse_report(data: Union[bytes, str]) -> Report:
    """
    JSON 形式のレポートを読み込む

    Raises:
        InvalidInputError: スキーマに合わない場合
    """
    try:
        return Report.model_validate_json(data)
    except ValidationError as e:
        raise InvalidInputError(f"Not a valid report: {e.error_count()} error(s), first: {e.errors()[0]['msg']}")
