"""
Training-time augmentation applied consistently to an image and its masks
"""
from .spec import AugmentationSpec, sample_spec, LUMINOSITY_RANGE, BLUR_SIGMA
from .transforms import (
    flip,
    rotate90,
    scale_luminosity,
    gaussian_kernel,
    blur_samples,
    gaussian_blur,
    apply,
)

__all__ = [
    "AugmentationSpec",
    "sample_spec",
    "LUMINOSITY_RANGE",
    "BLUR_SIGMA",
    "flip",
    "rotate90",
    "scale_luminosity",
    "gaussian_kernel",
    "blur_samples",
    "gaussian_blur",
    "apply",
]
