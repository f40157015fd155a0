"""
Hybrid mask-area voting diagnosis, predictor contract and baseline segmenter
"""
from .types import ClassMaskSet, ConfidenceVector, Diagnosis, PredictorContract
from .voting import build_class_training_mask, vote, classify, FALLBACK_LABEL
from .baseline import baseline_segment, largest_component
from .predictors import DirectoryPredictor, BaselinePredictor, fit_to_image, class_mask_name

__all__ = [
    "ClassMaskSet",
    "ConfidenceVector",
    "Diagnosis",
    "PredictorContract",
    "build_class_training_mask",
    "vote",
    "classify",
    "FALLBACK_LABEL",
    "baseline_segment",
    "largest_component",
    "DirectoryPredictor",
    "BaselinePredictor",
    "fit_to_image",
    "class_mask_name",
]
