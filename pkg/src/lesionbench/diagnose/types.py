from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Protocol, Sequence, runtime_checkable

import numpy as np

from ..errors import DimensionMismatchError
from ..masks import BinaryMask, active_count
from ..metrics import DiagnosisLabel, FALLBACK_LABEL, LABEL_NAMES, LABEL_ORDER, NUM_LABELS

CONFIDENCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ClassMaskSet:
    """One mask per diagnosis label, stored in DiagnosisLabel order"""

    masks: tuple[BinaryMask, ...]

    def __post_init__(self):
        masks = tuple(self.masks)
        if len(masks) != NUM_LABELS:
            raise ValueError(f"ClassMaskSet needs {NUM_LABELS} masks, got {len(masks)}")
        shapes = {mask.shape for mask in masks}
        if len(shapes) != 1:
            raise DimensionMismatchError(
                f"ClassMaskSet masks differ in dimensions: {sorted(shapes)}"
            )
        object.__setattr__(self, "masks", masks)

    @classmethod
    def from_mapping(
        cls, masks: Mapping[DiagnosisLabel, BinaryMask], width: int, height: int
    ) -> ClassMaskSet:
        """Labels absent from `masks` get an empty mask"""
        return cls(
            tuple(masks.get(label) or BinaryMask.empty(width, height) for label in LABEL_ORDER)
        )

    def __getitem__(self, label: DiagnosisLabel) -> BinaryMask:
        return self.masks[label.index]

    @property
    def shape(self) -> tuple[int, int]:
        return self.masks[0].shape

    def active_counts(self) -> list[int]:
        return [active_count(mask) for mask in self.masks]


@dataclass(frozen=True)
class ConfidenceVector:
    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) != NUM_LABELS:
            raise ValueError(f"ConfidenceVector needs {NUM_LABELS} entries, got {len(values)}")
        if any(v < 0 for v in values):
            raise ValueError("ConfidenceVector entries must be non-negative")
        if abs(sum(values) - 1.0) > CONFIDENCE_TOLERANCE:
            raise ValueError(f"ConfidenceVector entries must sum to 1, got {sum(values)}")
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls) -> ConfidenceVector:
        return cls(tuple([1.0 / NUM_LABELS] * NUM_LABELS))

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> ConfidenceVector:
        """Weights divided by their sum; all-zero weights give the uniform vector"""
        weights = np.asarray(weights, dtype=np.float64)
        total = weights.sum()
        if total <= 0:
            return cls.uniform()
        return cls(tuple((weights / total).tolist()))

    def __getitem__(self, label: DiagnosisLabel) -> float:
        return self.values[label.index]

    def argmax(self) -> DiagnosisLabel:
        return DiagnosisLabel.from_index(int(np.argmax(self.values)))

    def to_dict(self) -> dict[str, float]:
        return dict(zip(LABEL_NAMES, self.values))


@dataclass(frozen=True)
class Diagnosis:
    """
    Outcome of classifying one image, with the areas that produced it.
    `areas` are normalized by image area, in DiagnosisLabel order.
    """

    image_id: str
    label: DiagnosisLabel
    confidence: ConfidenceVector
    areas: tuple[float, ...] = field(default_factory=lambda: tuple([0.0] * NUM_LABELS))
    fallback: bool = False
    error: Optional[str] = None

    def __iter__(self):
        return iter((self.label, self.confidence))

    def rederive(self) -> DiagnosisLabel:
        """The label the recorded areas vote for"""
        if not any(self.areas):
            return FALLBACK_LABEL
        return DiagnosisLabel.from_index(int(np.argmax(self.areas)))

    def to_trace(self) -> dict:
        return {
            "image_id": self.image_id,
            "areas": dict(zip(LABEL_NAMES, self.areas)),
            "label": self.label.value,
            "fallback": self.fallback,
            "error": self.error,
        }


@runtime_checkable
class PredictorContract(Protocol):
    """
    A named source of predicted masks. Masks come back at the dimensions of
    the queried image.
    """

    name: str

    def segmentation(self, image_id: str, width: int, height: int) -> BinaryMask: ...

    def class_masks(self, image_id: str, width: int, height: int) -> ClassMaskSet: ...
