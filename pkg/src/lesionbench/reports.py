"""
Machine-readable reports: JSON documents, per-image CSVs and a self-audit
that recomputes aggregates from the per-image records
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, TypedDict

import numpy as np
import pandas as pd

from config import Config
from .metrics import LABEL_NAMES, round_report

UNDEFINED = "undefined"
AUDIT_TOLERANCE = 1e-9


class BoundaryRecord(TypedDict):
    image_id: str
    jaccard: float


class AttributeRecord(TypedDict):
    image_id: str
    attribute: str
    jaccard: float
    ground_truth_empty: bool


class DiagnosisRecord(TypedDict):
    image_id: str
    truth: str
    predicted: str
    correct: bool


class VoteRecord(TypedDict, total=False):
    image_id: str
    areas: dict[str, float]
    label: str
    fallback: bool
    error: Optional[str]


def _rounded(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        return round_report(value)
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    return value


@dataclass
class Report:
    kind: str
    config: dict = field(default_factory=dict)
    records: list[dict] = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    version: str = Config.VERSION

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> dict:
        """Aggregates rounded half-up to four decimals"""
        return _rounded(self.aggregates)

    def to_dict(self) -> dict:
        return {
            "tool": "lesionbench",
            "version": self.version,
            "kind": self.kind,
            "config": self.config,
            "records": self.records,
            "aggregates": self.aggregates,
            "summary": self.summary(),
            "warnings": self.warnings,
            "errors": self.errors,
        }

    def write_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)
        path.write_text(text + "\n", encoding="utf-8", newline="\n")
        return path

    def write_csv(self, path: str | Path) -> Path:
        """Per-image records, one row each; nested fields are flattened"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.json_normalize(self.records) if self.records else pd.DataFrame()
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
        return path


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=AUDIT_TOLERANCE)


def _audit_boundary(report: dict) -> list[str]:
    jaccards = [r["jaccard"] for r in report["records"]]
    expected = report["aggregates"].get("S1")
    if not jaccards:
        return [] if expected is None else ["S1 present without records"]
    recomputed = float(np.mean(jaccards))
    if expected is None or not _close(recomputed, expected):
        return [f"S1 {expected} != recomputed {recomputed}"]
    return []


def _audit_attributes(report: dict) -> list[str]:
    problems = []
    per_class = report["aggregates"].get("S2_per_class", {})
    defined = []
    for attribute, stated in per_class.items():
        scored = [
            r["jaccard"]
            for r in report["records"]
            if r["attribute"] == attribute and not r["ground_truth_empty"]
        ]
        if not scored:
            if stated != UNDEFINED:
                problems.append(f"S2({attribute}) {stated} but no non-empty ground truth")
            continue
        recomputed = float(np.mean(scored))
        defined.append(recomputed)
        if stated == UNDEFINED or not _close(recomputed, stated):
            problems.append(f"S2({attribute}) {stated} != recomputed {recomputed}")
    stated_overall = report["aggregates"].get("S2")
    if defined and stated_overall is not None:
        recomputed = float(np.mean(defined))
        if not _close(recomputed, stated_overall):
            problems.append(f"S2 {stated_overall} != recomputed {recomputed}")
    return problems


def _audit_diagnosis(report: dict) -> list[str]:
    problems = []
    records = report["records"]
    aggregates = report["aggregates"]
    index = {name: i for i, name in enumerate(LABEL_NAMES)}
    counts = np.zeros((len(LABEL_NAMES), len(LABEL_NAMES)), dtype=np.int64)
    for r in records:
        counts[index[r["truth"]], index[r["predicted"]]] += 1
    stated_counts = aggregates.get("confusion", {}).get("counts")
    if stated_counts is not None and counts.tolist() != stated_counts:
        problems.append("confusion counts differ from records")
    if records:
        s3 = float(np.trace(counts) / counts.sum())
        if not _close(s3, aggregates.get("S3", float("nan"))):
            problems.append(f"S3 {aggregates.get('S3')} != recomputed {s3}")
        totals = counts.sum(axis=1)
        recalls = [counts[i, i] / totals[i] for i in range(len(totals)) if totals[i] > 0]
        balanced = float(np.mean(recalls))
        if not _close(balanced, aggregates.get("balanced_accuracy", float("nan"))):
            problems.append(
                f"balanced accuracy {aggregates.get('balanced_accuracy')} != recomputed {balanced}"
            )
    return problems


def _audit_votes(report: dict) -> list[str]:
    problems = []
    for r in report["records"]:
        areas = [r["areas"][name] for name in LABEL_NAMES]
        expected = LABEL_NAMES[int(np.argmax(areas))] if any(areas) else "NV"
        if r["label"] != expected:
            problems.append(f"{r['image_id']}: label {r['label']} but areas vote {expected}")
    return problems


AUDITORS = {
    "eval-boundary": _audit_boundary,
    "eval-attributes": _audit_attributes,
    "eval-diagnosis": _audit_diagnosis,
    "diagnose": _audit_votes,
}


def audit(report: Report | dict) -> list[str]:
    """
    Recompute a report's aggregates from its own per-image records.

    Returns:
        list[str]: Descriptions of every discrepancy; empty when consistent.
    """
    data = report.to_dict() if isinstance(report, Report) else report
    auditor = AUDITORS.get(data["kind"])
    return auditor(data) if auditor else []
