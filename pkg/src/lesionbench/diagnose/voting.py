"""
Hybrid diagnosis: class training masks from boundary masks, and
largest-area voting over predicted class masks
"""
import logging

import numpy as np

from ..errors import LesionBenchError
from ..masks import BinaryMask, RasterImage, intersect
from ..metrics import DiagnosisLabel, FALLBACK_LABEL, LABEL_ORDER
from .types import ClassMaskSet, ConfidenceVector, Diagnosis, PredictorContract

logger = logging.getLogger(__name__)


def build_class_training_mask(boundary: BinaryMask, label: DiagnosisLabel) -> ClassMaskSet:
    """
    Assign every boundary pixel to `label`: the mask for `label` is the
    boundary, the other six are empty.
    """
    empty = BinaryMask.empty(boundary.width, boundary.height)
    return ClassMaskSet(tuple(boundary if other is label else empty for other in LABEL_ORDER))


def _vote(masks: ClassMaskSet, image_id: str = "") -> Diagnosis:
    counts = masks.active_counts()
    frame = masks.shape[0] * masks.shape[1]
    areas = tuple(count / frame for count in counts)
    if not any(counts):
        logger.warning(f"{image_id or 'image'}: all class masks empty, falling back to {FALLBACK_LABEL.value}")
        return Diagnosis(
            image_id=image_id,
            label=FALLBACK_LABEL,
            confidence=ConfidenceVector.uniform(),
            areas=areas,
            fallback=True,
        )
    # argmax on integer counts; first label in fixed order wins ties
    label = DiagnosisLabel.from_index(int(np.argmax(counts)))
    return Diagnosis(
        image_id=image_id,
        label=label,
        confidence=ConfidenceVector.from_weights(counts),
        areas=areas,
    )


def vote(masks: ClassMaskSet) -> tuple[DiagnosisLabel, ConfidenceVector]:
    """
    Pick the label whose mask has the largest active area.

    Confidences are the areas normalized to sum 1. When every mask is empty
    the confidences are uniform and the label falls back to NV.
    """
    diagnosis = _vote(masks)
    return diagnosis.label, diagnosis.confidence


def classify(
    image: RasterImage,
    image_id: str,
    boundary_predictor: PredictorContract,
    class_predictor: PredictorContract,
    intersect_boundary: bool = True,
) -> Diagnosis:
    """
    Run the hybrid pipeline for one image: fetch the boundary mask, fetch the
    seven class masks, optionally clip each class mask to the boundary, vote.

    Prediction failures do not raise: the image gets the uniform fallback and
    the error is kept on the returned Diagnosis.
    """
    width, height = image.shape
    try:
        class_masks = class_predictor.class_masks(image_id, width, height)
        if intersect_boundary:
            boundary = boundary_predictor.segmentation(image_id, width, height)
            class_masks = ClassMaskSet(
                tuple(intersect(mask, boundary) for mask in class_masks.masks)
            )
    except LesionBenchError as err:
        logger.error(f"{image_id}: {err}")
        return Diagnosis(
            image_id=image_id,
            label=FALLBACK_LABEL,
            confidence=ConfidenceVector.uniform(),
            fallback=True,
            error=str(err),
        )
    return _vote(class_masks, image_id)
