"""
PNG reading and writing for RasterImage and BinaryMask
"""
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import ImageFormatError
from .core import DEFAULT_THRESHOLD, mask_from_grayscale, mask_to_grayscale
from .types import BinaryMask, RasterImage

PNG_HEADER = b"\x89PNG\r\n\x1a\n"
JPEG_HEADER = b"\xff\xd8\xff"
# signature (8) + IHDR length and type (8) + width and height (8)
PNG_BIT_DEPTH_OFFSET = 24
IMAGE_SUFFIXES = frozenset([".png", ".jpg", ".jpeg"])
# Pillow modes holding more than 8 bits per sample
WIDE_MODES = frozenset(["I", "I;16", "I;16B", "I;16L", "I;16N", "F"])


def get_image_type_from_bytes(bytestr: bytes) -> str:
    """
    Determine the image file extension from the leading bytes of a file.
    """
    if len(bytestr) < 8:
        raise ImageFormatError("bytestr must be at least 8 bytes.")
    if bytestr.startswith(PNG_HEADER):
        return ".png"
    if bytestr.startswith(JPEG_HEADER):
        return ".jpg"
    raise ImageFormatError(
        f"Unsupported file type (signature: {bytestr[:8].hex()}). Supported types: jpg, png"
    )


def read_image(path: str | Path) -> RasterImage:
    """
    Load an 8-bit grayscale or RGB image. Palette and bilevel images are
    expanded; alpha is dropped; wider sample depths are rejected.

    Raises:
        ImageFormatError: On unreadable files or unsupported bit depths.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        header = fh.read(PNG_BIT_DEPTH_OFFSET + 1)
    if get_image_type_from_bytes(header[:8]) == ".png" and len(header) > PNG_BIT_DEPTH_OFFSET:
        # Pillow opens 16-bit RGB as 8-bit "RGB"
        depth = header[PNG_BIT_DEPTH_OFFSET]
        if depth > 8:
            raise ImageFormatError(f"{path}: only 8-bit images are supported (PNG bit depth {depth})")
    try:
        with Image.open(path) as pil:
            pil.load()
            mode = pil.mode
            if mode in WIDE_MODES:
                raise ImageFormatError(f"{path}: only 8-bit images are supported (mode {mode})")
            match mode:
                case "L" | "RGB":
                    converted = pil
                case "1" | "LA":
                    converted = pil.convert("L")
                case "P":
                    converted = pil.convert("RGB")
                case "RGBA" | "CMYK" | "YCbCr":
                    converted = pil.convert("RGB")
                case _:
                    raise ImageFormatError(f"{path}: unsupported image mode {mode}")
            return RasterImage(np.asarray(converted))
    except UnidentifiedImageError as err:
        raise ImageFormatError(f"{path}: {err}")


def image_size(path: str | Path) -> tuple[int, int]:
    """(width, height) read from the file header only"""
    try:
        with Image.open(path) as pil:
            return pil.size
    except UnidentifiedImageError as err:
        raise ImageFormatError(f"{path}: {err}")


def write_image(img: RasterImage, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(img.samples).save(path, format="PNG")
    return path


def read_mask(path: str | Path, threshold: int = DEFAULT_THRESHOLD) -> BinaryMask:
    img = read_image(path)
    if img.channels != 1:
        # RGB-encoded masks are binarized on their first channel
        img = RasterImage(img.samples[:, :, 0])
    return mask_from_grayscale(img, threshold)


def write_mask(mask: BinaryMask, path: str | Path) -> Path:
    """Writes a 1-channel PNG holding 0 and 255"""
    return write_image(mask_to_grayscale(mask), path)
