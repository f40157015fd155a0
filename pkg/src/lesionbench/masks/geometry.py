"""
Resize/pad preprocessing and its exact inverse.

Images are resampled bilinearly, masks with nearest neighbour so they stay
binary. Padding is centered; an odd remainder goes to the bottom/right.
"""
from dataclasses import replace
from typing import Tuple, TypeVar

import numpy as np
from PIL import Image

from ..errors import DimensionMismatchError, ImageFormatError
from .types import BinaryMask, GeometryRecord, RasterImage, round_half_up

Raster = TypeVar("Raster", BinaryMask, RasterImage)


def _resample(item: Raster, width: int, height: int) -> Raster:
    if item.shape == (width, height):
        return item
    if isinstance(item, BinaryMask):
        pil = Image.fromarray(np.where(item.bits, 255, 0).astype(np.uint8))
        resized = pil.resize((width, height), Image.Resampling.NEAREST)
        return BinaryMask(np.asarray(resized) > 127)
    pil = Image.fromarray(item.samples)
    resized = pil.resize((width, height), Image.Resampling.BILINEAR)
    return RasterImage(np.asarray(resized))


def plan_geometry(width: int, height: int, target: int) -> GeometryRecord:
    """
    The record that resize_longest_side followed by pad_to_square would
    produce for an image of the given dimensions, without touching pixels.
    """
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"Zero-size input: {width}x{height}")
    if target <= 0:
        raise ValueError(f"target must be positive, got {target}")
    record = GeometryRecord(
        original_width=width,
        original_height=height,
        scale=target / max(width, height),
        target_side=target,
    )
    return _with_pads(record, target)


def _with_pads(record: GeometryRecord, side: int) -> GeometryRecord:
    extra_x = side - record.resized_width
    extra_y = side - record.resized_height
    return replace(
        record,
        target_side=side,
        pad_left=extra_x // 2,
        pad_right=extra_x - extra_x // 2,
        pad_top=extra_y // 2,
        pad_bottom=extra_y - extra_y // 2,
    )


def resize_longest_side(item: Raster, target: int) -> Tuple[Raster, GeometryRecord]:
    """
    Scale so the longest side equals `target`, preserving aspect ratio.

    Returns:
        The resized image or mask and a GeometryRecord with zero pads.

    Raises:
        ValueError: If target is not positive.
    """
    if target <= 0:
        raise ValueError(f"target must be positive, got {target}")
    record = GeometryRecord(
        original_width=item.width,
        original_height=item.height,
        scale=target / max(item.width, item.height),
        target_side=target,
    )
    resized = _resample(item, record.resized_width, record.resized_height)
    return resized, record


def pad_to_square(
    item: Raster, side: int, record: GeometryRecord
) -> Tuple[Raster, GeometryRecord]:
    """
    Zero-pad to `side` x `side` with the content centered.

    Raises:
        DimensionMismatchError: If the input is larger than `side` or does
            not match the resized dimensions in `record`.
    """
    if item.width > side or item.height > side:
        raise DimensionMismatchError(
            f"Input {item.width}x{item.height} is larger than side {side}"
        )
    if item.shape != (record.resized_width, record.resized_height):
        raise DimensionMismatchError(
            f"Input {item.width}x{item.height} does not match record "
            f"{record.resized_width}x{record.resized_height}"
        )
    padded_record = _with_pads(record, side)
    pads = (
        (padded_record.pad_top, padded_record.pad_bottom),
        (padded_record.pad_left, padded_record.pad_right),
    )
    if isinstance(item, BinaryMask):
        return BinaryMask(np.pad(item.bits, pads)), padded_record
    if item.channels == 3:
        pads = pads + ((0, 0),)
    return RasterImage(np.pad(item.samples, pads)), padded_record


def preprocess(item: Raster, target: int) -> Tuple[Raster, GeometryRecord]:
    """Resize to `target` along the longest side, then pad to a square"""
    resized, record = resize_longest_side(item, target)
    return pad_to_square(resized, target, record)


def crop_padding(item: Raster, record: GeometryRecord) -> Raster:
    """Remove the pads recorded in `record`"""
    if item.shape != (record.padded_width, record.padded_height):
        raise DimensionMismatchError(
            f"Input {item.width}x{item.height} does not match padded record "
            f"{record.padded_width}x{record.padded_height}"
        )
    rows = slice(record.pad_top, record.pad_top + record.resized_height)
    cols = slice(record.pad_left, record.pad_left + record.resized_width)
    if isinstance(item, BinaryMask):
        return BinaryMask(item.bits[rows, cols])
    return RasterImage(item.samples[rows, cols])


def restore_geometry(mask: BinaryMask, record: GeometryRecord) -> BinaryMask:
    """
    Map a network-resolution mask back to the original image resolution:
    crop the padding, then rescale by 1/scale with nearest neighbour.

    Raises:
        DimensionMismatchError: If the mask is not target_side x target_side.
    """
    side = record.target_side
    if mask.shape != (side, side) or mask.shape != (
        record.padded_width,
        record.padded_height,
    ):
        raise DimensionMismatchError(
            f"Mask {mask.width}x{mask.height} does not match record side {side}"
        )
    cropped = crop_padding(mask, record)
    return _resample(cropped, record.original_width, record.original_height)
