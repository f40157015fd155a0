"""
Exception hierarchy shared by every lesionbench module
"""
from typing import Optional


class LesionBenchError(Exception):
    """Base class for all errors raised deliberately by lesionbench"""


class ConfigError(LesionBenchError, ValueError):
    pass


class DimensionMismatchError(LesionBenchError, ValueError):
    pass


class ImageFormatError(LesionBenchError, ValueError):
    pass


class GroundTruthError(LesionBenchError, ValueError):
    pass


class DatasetError(LesionBenchError):
    pass


class SplitError(LesionBenchError, ValueError):
    pass


class PredictionMissingError(LesionBenchError, LookupError):
    def __init__(self, message: str, image_ids: Optional[list[str]] = None):
        super().__init__(message)
        self.image_ids = image_ids or []


class UndefinedScoreError(LesionBenchError):
    """
    Raised when a per-class attribute score has no non-empty ground truth
    to average over. `attribute` names the class so callers can report it.
    """

    def __init__(self, message: str, attribute=None):
        super().__init__(message)
        self.attribute = attribute
