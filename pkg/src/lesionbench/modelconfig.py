"""
The Mask R-CNN configurations used to train the mask predictors, kept as
validated records. lesionbench never trains; these document what a
predictor plugged into the contract was built with.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Optional

from .errors import ConfigError


@dataclass(frozen=True)
class ModelConfig:
    task: int
    num_classes: int  # includes background
    image_width: int
    image_height: int
    backbone: str = "resnet50"
    anchor_scales: tuple[int, ...] = (32, 64, 128, 256, 512)
    anchors_per_image: int = 64
    mask_shape: tuple[int, int] = (56, 56)
    train_rois_per_image: int = 128
    learning_rate: float = 0.001
    learning_momentum: float = 0.9
    weight_decay: float = 0.0001
    epochs: Optional[int] = None
    pretrained_weights: str = "coco"

    def validate(self) -> ModelConfig:
        """
        Raises:
            ConfigError: On non-positive sizes or rates, or unsorted anchor scales.
        """
        positive = {
            "num_classes": self.num_classes,
            "image_width": self.image_width,
            "image_height": self.image_height,
            "anchors_per_image": self.anchors_per_image,
            "train_rois_per_image": self.train_rois_per_image,
            "learning_rate": self.learning_rate,
        }
        for name, value in positive.items():
            if value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.num_classes < 2:
            raise ConfigError("num_classes must count background plus at least one class")
        if not self.anchor_scales or list(self.anchor_scales) != sorted(set(self.anchor_scales)):
            raise ConfigError(f"anchor_scales must be strictly increasing, got {self.anchor_scales}")
        if min(self.mask_shape) <= 0:
            raise ConfigError(f"mask_shape must be positive, got {self.mask_shape}")
        if not 0 <= self.learning_momentum < 1:
            raise ConfigError(f"learning_momentum must lie in [0, 1), got {self.learning_momentum}")
        if self.weight_decay < 0:
            raise ConfigError(f"weight_decay must be non-negative, got {self.weight_decay}")
        if self.epochs is not None and self.epochs <= 0:
            raise ConfigError(f"epochs must be positive, got {self.epochs}")
        return self

    def to_dict(self) -> dict:
        data = asdict(self)
        data["anchor_scales"] = list(self.anchor_scales)
        data["mask_shape"] = list(self.mask_shape)
        return data


BOUNDARY_CONFIG = ModelConfig(task=1, num_classes=2, image_width=768, image_height=768, epochs=40)
# Differs from task 1 only in classes and schedule
ATTRIBUTE_CONFIG = replace(BOUNDARY_CONFIG, task=2, num_classes=6, epochs=80)
# Task 3 images are fixed at 600x450; the schedule was not published
DIAGNOSIS_CONFIG = replace(
    BOUNDARY_CONFIG, task=3, num_classes=8, image_width=600, image_height=450, epochs=None
)

CONFIGS = {1: BOUNDARY_CONFIG, 2: ATTRIBUTE_CONFIG, 3: DIAGNOSIS_CONFIG}


def for_task(task: int) -> ModelConfig:
    try:
        return CONFIGS[task].validate()
    except KeyError:
        raise ConfigError(f"Invalid task: {task} - should be 1, 2 or 3")
