"""
Task scores: boundary score, per-class and overall attribute scores,
diagnosis accuracy, confusion matrix and balanced accuracy
"""
import logging
from decimal import Decimal, ROUND_HALF_UP
from typing import Mapping, Optional, Sequence

import numpy as np
from sklearn.metrics import accuracy_score, confusion_matrix

from ..errors import UndefinedScoreError
from ..masks import active_count, jaccard
from ..parallel import map_ordered
from .types import (
    AttributeClass,
    ConfusionMatrix,
    DiagnosisLabel,
    LABEL_ORDER,
    MaskPair,
)

logger = logging.getLogger(__name__)

REPORT_DECIMALS = 4


def round_report(value: float, decimals: int = REPORT_DECIMALS) -> float:
    """Round half-up to `decimals` places, the way scores are printed in reports"""
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def pair_jaccards(pairs: Sequence[MaskPair]) -> list[float]:
    """Per-pair Jaccard indices, in input order"""
    return map_ordered(lambda pair: jaccard(pair.ground_truth, pair.predicted), pairs)


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(np.asarray(values, dtype=np.float64)))


def boundary_score(pairs: Sequence[MaskPair]) -> float:
    """
    Mean Jaccard index over all ground-truth/prediction pairs.

    Raises:
        ValueError: If `pairs` is empty.
    """
    if not pairs:
        raise ValueError("boundary_score needs at least one mask pair")
    return _mean(pair_jaccards(pairs))


def attribute_class_score(pairs: Sequence[MaskPair], attribute: AttributeClass) -> float:
    """
    Mean Jaccard index for one attribute class over the pairs whose ground
    truth is non-empty. Pairs with empty ground truth count neither in the
    sum nor in the denominator.

    Raises:
        UndefinedScoreError: If no pair has a non-empty ground truth.
    """
    scored = [pair for pair in pairs if active_count(pair.ground_truth) > 0]
    if not scored:
        raise UndefinedScoreError(
            f"Score for {attribute.value} is undefined: no non-empty ground truth masks",
            attribute=attribute,
        )
    return _mean(pair_jaccards(scored))


def attribute_overall_score(
    per_class: Mapping[AttributeClass, Optional[float]] | Sequence[Optional[float]],
    skip_undefined: bool = False,
) -> float:
    """
    Unweighted mean of the five per-class attribute scores.

    Args:
        per_class: Scores keyed by AttributeClass, or a sequence of five
            scores in AttributeClass order. `None` marks an undefined score.
        skip_undefined: Average only the defined classes instead of failing.

    Raises:
        UndefinedScoreError: If a class score is undefined (naming the class),
            or if every class is undefined when skipping.
    """
    if not isinstance(per_class, Mapping):
        values = list(per_class)
        if len(values) != len(AttributeClass):
            raise ValueError(
                f"Expected {len(AttributeClass)} class scores, got {len(values)}"
            )
        per_class = dict(zip(AttributeClass, values))
    defined = []
    for attribute in AttributeClass:
        score = per_class.get(attribute)
        if score is None:
            if not skip_undefined:
                raise UndefinedScoreError(
                    f"Overall score needs every class; {attribute.value} is undefined",
                    attribute=attribute,
                )
            logger.warning(f"Excluding undefined class {attribute.value} from overall score")
            continue
        defined.append(score)
    if not defined:
        raise UndefinedScoreError("Overall score is undefined: every class is undefined")
    return _mean(defined)


def _check_label_lists(predictions: Sequence, truths: Sequence) -> None:
    if len(predictions) != len(truths):
        raise ValueError(
            f"Length mismatch: {len(predictions)} predictions vs {len(truths)} truths"
        )


def diagnosis_accuracy(
    predictions: Sequence[DiagnosisLabel], truths: Sequence[DiagnosisLabel]
) -> float:
    """Fraction of positions where the prediction equals the truth"""
    _check_label_lists(predictions, truths)
    if not predictions:
        raise ValueError("diagnosis_accuracy needs at least one prediction")
    return float(
        accuracy_score([t.index for t in truths], [p.index for p in predictions])
    )


def confusion(
    predictions: Sequence[DiagnosisLabel], truths: Sequence[DiagnosisLabel]
) -> ConfusionMatrix:
    """Counts of (actual, predicted) pairs over the seven labels"""
    _check_label_lists(predictions, truths)
    if not predictions:
        return ConfusionMatrix(np.zeros((len(LABEL_ORDER), len(LABEL_ORDER)), dtype=np.int64))
    counts = confusion_matrix(
        [t.index for t in truths],
        [p.index for p in predictions],
        labels=list(range(len(LABEL_ORDER))),
    )
    return ConfusionMatrix(counts)


def per_class_recall(cm: ConfusionMatrix) -> dict[DiagnosisLabel, Optional[float]]:
    """Diagonal of the row-normalized matrix; None for rows without samples"""
    totals = cm.row_totals
    normalized = cm.row_normalized
    return {
        label: (float(normalized[label.index, label.index]) if totals[label.index] > 0 else None)
        for label in LABEL_ORDER
    }


def balanced_accuracy(cm: ConfusionMatrix) -> float:
    """
    Mean per-class recall (normalized multi-class accuracy). Rows without
    samples are left out of the mean with a warning.

    Raises:
        UndefinedScoreError: If every row is empty.
    """
    recalls = per_class_recall(cm)
    included = []
    for label, recall in recalls.items():
        if recall is None:
            logger.warning(f"No samples of class {label.value}; excluded from balanced accuracy")
            continue
        included.append(recall)
    if not included:
        raise UndefinedScoreError("Balanced accuracy is undefined: confusion matrix is empty")
    return _mean(included)


def confusion_summary(cm: ConfusionMatrix) -> dict:
    """
    Best and worst recalled classes and where the worst class's samples go.
    `worst_confused_with` is None when the worst class is never misclassified.
    """
    recalls = {label: r for label, r in per_class_recall(cm).items() if r is not None}
    if not recalls:
        raise UndefinedScoreError("Confusion summary is undefined: confusion matrix is empty")
    # max/min keep the first label in fixed order on ties
    best = max(recalls, key=lambda label: recalls[label])
    worst = min(recalls, key=lambda label: recalls[label])
    row = cm.row_normalized[worst.index].copy()
    row[worst.index] = 0.0
    confused_with = DiagnosisLabel.from_index(int(np.argmax(row))) if row.max() > 0 else None
    return {
        "best_class": best.value,
        "best_recall": recalls[best],
        "worst_class": worst.value,
        "worst_recall": recalls[worst],
        "worst_confused_with": confused_with.value if confused_with else None,
        "worst_confused_fraction": float(row[confused_with.index]) if confused_with else 0.0,
    }
