"""
Predictor contract implementations.

Directory layout under a predictor root:

    task1/<image_id>_segmentation.png
    task2/<image_id>_attribute_<name>.png
    task3/<image_id>_<LABEL>.png   (missing file = empty mask)

Masks stored at network resolution (target_side x target_side) are mapped back
to the image dimensions with the planned resize/pad geometry.
"""
import logging
from pathlib import Path
from typing import Callable, Mapping

from config import Config
from ..errors import DimensionMismatchError, PredictionMissingError
from ..masks import BinaryMask, RasterImage, plan_geometry, read_image, read_mask, restore_geometry
from ..metrics import AttributeClass, DiagnosisLabel, LABEL_ORDER
from .baseline import baseline_segment
from .types import ClassMaskSet

logger = logging.getLogger(__name__)

TASK_DIRS = {1: "task1", 2: "task2", 3: "task3"}


def class_mask_name(image_id: str, label: DiagnosisLabel) -> str:
    return f"{image_id}_{label.value}.png"


def fit_to_image(
    mask: BinaryMask, width: int, height: int, target_side: int, source: str = ""
) -> BinaryMask:
    """
    Return `mask` at width x height, restoring it from network resolution
    when it is a target_side square.

    Raises:
        DimensionMismatchError: For any other shape.
    """
    if mask.shape == (width, height):
        return mask
    if mask.shape == (target_side, target_side):
        return restore_geometry(mask, plan_geometry(width, height, target_side))
    raise DimensionMismatchError(
        f"{source}: mask {mask.width}x{mask.height} matches neither image "
        f"{width}x{height} nor network side {target_side}"
    )


class DirectoryPredictor:
    """Reads predicted masks from a predictor root directory"""

    def __init__(
        self,
        root: str | Path,
        name: str | None = None,
        target_side: int = Config.TARGET_SIDE,
        threshold: int = Config.MASK_THRESHOLD,
    ):
        self.root = Path(root)
        self.name = name or self.root.name
        self.target_side = target_side
        self.threshold = threshold

    def task_dir(self, task: int) -> Path:
        return self.root / TASK_DIRS[task]

    def has_predictions(self, task: int) -> bool:
        directory = self.task_dir(task)
        return directory.is_dir() and any(directory.glob("*.png"))

    def _read(self, path: Path, width: int, height: int) -> BinaryMask:
        mask = read_mask(path, self.threshold)
        return fit_to_image(mask, width, height, self.target_side, source=str(path))

    def segmentation(self, image_id: str, width: int, height: int) -> BinaryMask:
        path = self.task_dir(1) / f"{image_id}_segmentation.png"
        if not path.is_file():
            raise PredictionMissingError(
                f"{self.name}: no boundary prediction for {image_id}", [image_id]
            )
        return self._read(path, width, height)

    def attributes(
        self, image_id: str, width: int, height: int
    ) -> dict[AttributeClass, BinaryMask]:
        masks = {}
        for attribute in AttributeClass:
            path = self.task_dir(2) / f"{image_id}_attribute_{attribute.value}.png"
            if not path.is_file():
                raise PredictionMissingError(
                    f"{self.name}: no {attribute.value} prediction for {image_id}", [image_id]
                )
            masks[attribute] = self._read(path, width, height)
        return masks

    def class_masks(self, image_id: str, width: int, height: int) -> ClassMaskSet:
        found = {}
        for label in LABEL_ORDER:
            path = self.task_dir(3) / class_mask_name(image_id, label)
            if path.is_file():
                found[label] = self._read(path, width, height)
        if not found:
            raise PredictionMissingError(
                f"{self.name}: no class mask predictions for {image_id}", [image_id]
            )
        return ClassMaskSet.from_mapping(found, width, height)


class BaselinePredictor:
    """Boundary masks computed on the fly by the Otsu baseline"""

    name = "baseline"

    def __init__(self, images: Mapping[str, Path] | Callable[[str], RasterImage]):
        self._images = images

    def _load(self, image_id: str) -> RasterImage:
        if callable(self._images):
            return self._images(image_id)
        path = self._images.get(image_id)
        if path is None:
            raise PredictionMissingError(f"baseline: no image for {image_id}", [image_id])
        return read_image(path)

    def segmentation(self, image_id: str, width: int, height: int) -> BinaryMask:
        img = self._load(image_id)
        if img.shape != (width, height):
            raise DimensionMismatchError(
                f"baseline: image {image_id} is {img.width}x{img.height}, expected {width}x{height}"
            )
        return baseline_segment(img)

    def class_masks(self, image_id: str, width: int, height: int) -> ClassMaskSet:
        raise PredictionMissingError(
            "baseline: the baseline predictor only produces boundary masks", [image_id]
        )
