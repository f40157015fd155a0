"""
Binary masks, raster images, Jaccard index and resize/pad geometry
"""
from .types import BinaryMask, RasterImage, GeometryRecord
from .core import (
    jaccard,
    active_count,
    normalized_area,
    intersect,
    luminance,
    mask_from_grayscale,
    mask_to_grayscale,
)
from .geometry import (
    plan_geometry,
    resize_longest_side,
    pad_to_square,
    preprocess,
    crop_padding,
    restore_geometry,
)
from .io import read_image, read_mask, write_image, write_mask, image_size

__all__ = [
    "BinaryMask",
    "RasterImage",
    "GeometryRecord",
    "jaccard",
    "active_count",
    "normalized_area",
    "intersect",
    "luminance",
    "mask_from_grayscale",
    "mask_to_grayscale",
    "plan_geometry",
    "resize_longest_side",
    "pad_to_square",
    "preprocess",
    "crop_padding",
    "restore_geometry",
    "read_image",
    "read_mask",
    "write_image",
    "write_mask",
    "image_size",
]
