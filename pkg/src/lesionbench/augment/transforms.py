"""
Geometric (flip, rotate90) and photometric (luminosity, blur) transforms.

Geometric transforms accept images and masks alike; photometric ones only
ever touch images.
"""
import math
from typing import Literal, Sequence, Tuple, TypeVar

import numpy as np
from scipy import ndimage

from ..errors import DimensionMismatchError
from ..masks import BinaryMask, RasterImage
from .spec import LUMINOSITY_RANGE, AugmentationSpec

Raster = TypeVar("Raster", BinaryMask, RasterImage)
Axis = Literal["horizontal", "vertical"]


def _rebuild(item: Raster, array: np.ndarray) -> Raster:
    return BinaryMask(array) if isinstance(item, BinaryMask) else RasterImage(array)


def _array(item: Raster) -> np.ndarray:
    return item.bits if isinstance(item, BinaryMask) else item.samples


def flip(item: Raster, axis: Axis) -> Raster:
    """Mirror left-right (horizontal) or top-bottom (vertical)"""
    match axis:
        case "horizontal":
            return _rebuild(item, np.flip(_array(item), axis=1))
        case "vertical":
            return _rebuild(item, np.flip(_array(item), axis=0))
        case _:
            raise ValueError(f"Invalid axis: {axis} - should be 'horizontal' or 'vertical'")


def rotate90(item: Raster, k: int) -> Raster:
    """
    Rotate counter-clockwise by k quarter turns. Pixel (x, y) of a W x H
    input lands on (y, W - 1 - x) for k = 1.
    """
    if k not in (0, 1, 2, 3):
        raise ValueError(f"k must be in 0..3, got {k}")
    if k == 0:
        return item
    return _rebuild(item, np.rot90(_array(item), k=k, axes=(0, 1)))


def _to_uint8(values: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


def scale_luminosity(img: RasterImage, factor: float) -> RasterImage:
    """Multiply every sample by `factor`, rounding and clamping to 8 bits"""
    if isinstance(img, BinaryMask):
        raise TypeError("Masks are never luminosity-scaled")
    low, high = LUMINOSITY_RANGE
    if not low <= factor <= high:
        raise ValueError(f"factor must lie in [{low}, {high}], got {factor}")
    return RasterImage(_to_uint8(img.samples.astype(np.float64) * factor))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian of radius ceil(3 * sigma)"""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = math.ceil(3 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    weights = np.exp(-(offsets**2) / (2 * sigma**2))
    return weights / weights.sum()


def blur_samples(samples: np.ndarray, sigma: float) -> np.ndarray:
    """
    Separable Gaussian blur over the two spatial axes with clamp-to-edge
    borders. Returns float64 without rounding.
    """
    kernel = gaussian_kernel(sigma)
    blurred = samples.astype(np.float64)
    for axis in (0, 1):
        blurred = ndimage.convolve1d(blurred, kernel, axis=axis, mode="nearest")
    return blurred


def gaussian_blur(img: RasterImage, sigma: float) -> RasterImage:
    if isinstance(img, BinaryMask):
        raise TypeError("Masks are never blurred")
    return RasterImage(_to_uint8(blur_samples(img.samples, sigma)))


def apply_geometric(spec: AugmentationSpec, item: Raster) -> Raster:
    if spec.flip_h:
        item = flip(item, "horizontal")
    if spec.flip_v:
        item = flip(item, "vertical")
    return rotate90(item, spec.quarter_turns)


def apply(
    spec: AugmentationSpec, img: RasterImage, masks: Sequence[BinaryMask] = ()
) -> Tuple[RasterImage, list[BinaryMask]]:
    """
    Apply a spec to an image and its masks in the fixed order
    flips -> rotation -> luminosity -> blur. Masks only see the geometric part.

    Raises:
        DimensionMismatchError: If a mask does not match the image dimensions.
    """
    for mask in masks:
        if mask.shape != img.shape:
            raise DimensionMismatchError(
                f"Mask {mask.width}x{mask.height} does not match image {img.width}x{img.height}"
            )
    out = apply_geometric(spec, img)
    if spec.luminosity != 1.0:
        out = scale_luminosity(out, spec.luminosity)
    if spec.blur_sigma > 0:
        out = gaussian_blur(out, spec.blur_sigma)
    return out, [apply_geometric(spec, mask) for mask in masks]
