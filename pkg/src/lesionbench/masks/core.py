"""
Mask primitives: Jaccard index, areas, luminance and binarization
"""
import logging

import numpy as np

from ..errors import DimensionMismatchError, ImageFormatError
from .types import BinaryMask, RasterImage

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 127
# ITU-R BT.601 luma weights
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def check_same_shape(a, b) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"Dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )


def jaccard(a: BinaryMask, b: BinaryMask) -> float:
    """
    Jaccard index |A ∩ B| / |A ∪ B| of two same-shape masks.

    Two empty masks score 1.0 so that jaccard(a, a) == 1 for every mask.

    Raises:
        DimensionMismatchError: If the masks differ in width or height.
    """
    check_same_shape(a, b)
    union = int(np.count_nonzero(a.bits | b.bits))
    if union == 0:
        return 1.0
    intersection = int(np.count_nonzero(a.bits & b.bits))
    return intersection / union


def active_count(mask: BinaryMask) -> int:
    return int(np.count_nonzero(mask.bits))


def normalized_area(mask: BinaryMask) -> float:
    """Fraction of the frame covered by active pixels"""
    return active_count(mask) / (mask.width * mask.height)


def intersect(a: BinaryMask, b: BinaryMask) -> BinaryMask:
    check_same_shape(a, b)
    return BinaryMask(a.bits & b.bits)


def luminance(img: RasterImage) -> np.ndarray:
    """Grayscale luminance as float64, (height, width)"""
    if img.channels == 1:
        return img.samples.astype(np.float64)
    return img.samples.astype(np.float64) @ LUMA_WEIGHTS


def mask_from_grayscale(img: RasterImage, threshold: int = DEFAULT_THRESHOLD) -> BinaryMask:
    """
    Binarize a 1-channel image: a pixel is active iff its sample exceeds
    `threshold`.

    Raises:
        ImageFormatError: If the image has more than one channel.
    """
    if img.channels != 1:
        raise ImageFormatError(
            f"Masks must be 1-channel images, got {img.channels} channels"
        )
    return BinaryMask(img.samples > threshold)


def mask_to_grayscale(mask: BinaryMask) -> RasterImage:
    """Serializable 0/255 form of a mask"""
    return RasterImage(np.where(mask.bits, 255, 0).astype(np.uint8))
