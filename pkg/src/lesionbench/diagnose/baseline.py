"""
Deterministic stand-in for a lesion boundary model: Otsu threshold on
luminance, keep the darker side, largest 4-connected component, fill holes.
"""
import logging

import numpy as np
from scipy import ndimage
from skimage.filters import threshold_otsu

from ..masks import BinaryMask, RasterImage, luminance

logger = logging.getLogger(__name__)

# 4-connectivity
CROSS = ndimage.generate_binary_structure(2, 1)


def largest_component(bits: np.ndarray) -> np.ndarray:
    """The largest 4-connected component; ties keep the first in scan order"""
    labels, count = ndimage.label(bits, structure=CROSS)
    if count == 0:
        return np.zeros_like(bits, dtype=bool)
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    return labels == int(np.argmax(sizes))


def baseline_segment(img: RasterImage) -> BinaryMask:
    """
    Segment the lesion as the largest dark region of the image.

    A single-intensity image has no threshold and yields an all-false mask.
    """
    gray = luminance(img)
    if gray.min() == gray.max():
        logger.debug(f"Constant {img.width}x{img.height} image, returning empty mask")
        return BinaryMask.empty(img.width, img.height)
    threshold = threshold_otsu(gray)
    dark = gray <= threshold
    lesion = ndimage.binary_fill_holes(largest_component(dark))
    return BinaryMask(lesion)
