from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..masks import BinaryMask
from ..masks.core import check_same_shape


class AttributeClass(Enum):
    """The five dermoscopic attributes, in their fixed reporting order"""

    GLOBULES = "globules"
    MILIA_LIKE_CYST = "milia_like_cyst"
    NEGATIVE_NETWORK = "negative_network"
    PIGMENT_NETWORK = "pigment_network"
    STREAKS = "streaks"

    @classmethod
    def from_name(cls, name: str) -> AttributeClass:
        try:
            return cls(name)
        except ValueError:
            raise ValueError(
                f"Unknown attribute class: {name}. "
                f"Must be one of: {', '.join(a.value for a in cls)}"
            )


class DiagnosisLabel(Enum):
    """The seven diagnosis classes; declaration order is the confusion-matrix axis order"""

    MEL = "MEL"
    NV = "NV"
    BCC = "BCC"
    AKIEC = "AKIEC"
    BKL = "BKL"
    DF = "DF"
    VASC = "VASC"

    @property
    def index(self) -> int:
        return LABEL_ORDER.index(self)

    @classmethod
    def from_index(cls, index: int) -> DiagnosisLabel:
        return LABEL_ORDER[index]

    @classmethod
    def from_name(cls, name: str) -> DiagnosisLabel:
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise ValueError(
                f"Unknown diagnosis label: {name}. "
                f"Must be one of: {', '.join(label.value for label in cls)}"
            )


LABEL_ORDER: tuple[DiagnosisLabel, ...] = tuple(DiagnosisLabel)
LABEL_NAMES: tuple[str, ...] = tuple(label.value for label in LABEL_ORDER)
NUM_LABELS = len(LABEL_ORDER)
# emitted when no class has any area
FALLBACK_LABEL = DiagnosisLabel.NV


@dataclass(frozen=True)
class MaskPair:
    ground_truth: BinaryMask
    predicted: BinaryMask
    image_id: str = ""

    def __post_init__(self):
        check_same_shape(self.ground_truth, self.predicted)


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """
    7x7 counts, rows = actual label, columns = predicted label, both in
    DiagnosisLabel order.
    """

    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.shape != (NUM_LABELS, NUM_LABELS):
            raise ValueError(
                f"ConfusionMatrix needs {NUM_LABELS}x{NUM_LABELS} counts, got {counts.shape}"
            )
        if (counts < 0).any():
            raise ValueError("ConfusionMatrix counts must be non-negative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def row_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def row_normalized(self) -> np.ndarray:
        """Rows divided by their totals; rows without samples stay all-zero"""
        totals = self.row_totals.astype(np.float64)
        return np.divide(
            self.counts.astype(np.float64),
            totals[:, None],
            out=np.zeros((NUM_LABELS, NUM_LABELS), dtype=np.float64),
            where=totals[:, None] > 0,
        )

    def count(self, actual: DiagnosisLabel, predicted: DiagnosisLabel) -> int:
        return int(self.counts[actual.index, predicted.index])

    def to_dict(self) -> dict:
        return {
            "labels": list(LABEL_NAMES),
            "counts": self.counts.tolist(),
            "row_normalized": self.row_normalized.tolist(),
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return bool(np.array_equal(self.counts, other.counts))

    __hash__ = None
