"""
Challenge scores and the task-3 confusion table
"""
from .types import (
    AttributeClass,
    DiagnosisLabel,
    MaskPair,
    ConfusionMatrix,
    LABEL_ORDER,
    LABEL_NAMES,
    NUM_LABELS,
    FALLBACK_LABEL,
)
from .scores import (
    boundary_score,
    attribute_class_score,
    attribute_overall_score,
    diagnosis_accuracy,
    confusion,
    balanced_accuracy,
    per_class_recall,
    confusion_summary,
    pair_jaccards,
    round_report,
)

__all__ = [
    "AttributeClass",
    "DiagnosisLabel",
    "MaskPair",
    "ConfusionMatrix",
    "LABEL_ORDER",
    "LABEL_NAMES",
    "NUM_LABELS",
    "FALLBACK_LABEL",
    "boundary_score",
    "attribute_class_score",
    "attribute_overall_score",
    "diagnosis_accuracy",
    "confusion",
    "balanced_accuracy",
    "per_class_recall",
    "confusion_summary",
    "pair_jaccards",
    "round_report",
]
