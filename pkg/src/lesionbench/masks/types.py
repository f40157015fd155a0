from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..errors import ImageFormatError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """
    2-D grid of active pixels stored as a read-only boolean array of shape
    (height, width). Pixel (x, y) is `bits[y, x]`.
    """

    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool, copy=True)
        if bits.ndim != 2:
            raise ValueError(f"BinaryMask needs a 2-D grid, got shape {bits.shape}")
        if bits.shape[0] <= 0 or bits.shape[1] <= 0:
            raise ValueError(f"BinaryMask dimensions must be positive, got {bits.shape}")
        object.__setattr__(self, "bits", _frozen(bits))

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    @property
    def shape(self) -> tuple[int, int]:
        """(width, height)"""
        return self.width, self.height

    @classmethod
    def empty(cls, width: int, height: int) -> BinaryMask:
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def full(cls, width: int, height: int) -> BinaryMask:
        return cls(np.ones((height, width), dtype=bool))

    @classmethod
    def from_coords(
        cls, width: int, height: int, coords: Iterable[tuple[int, int]]
    ) -> BinaryMask:
        bits = np.zeros((height, width), dtype=bool)
        for x, y in coords:
            bits[y, x] = True
        return cls(bits)

    def coords(self) -> set[tuple[int, int]]:
        """Active pixels as a set of (x, y) coordinates"""
        ys, xs = np.nonzero(self.bits)
        return {(int(x), int(y)) for x, y in zip(xs, ys)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryMask({self.width}x{self.height}, active={int(self.bits.sum())})"


@dataclass(frozen=True, eq=False)
class RasterImage:
    """
    8-bit raster with 1 (grayscale) or 3 (RGB) channels.
    Samples are (height, width) for grayscale and (height, width, 3) for RGB.
    """

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.dtype != np.uint8:
            if not np.issubdtype(samples.dtype, np.integer):
                raise ImageFormatError(
                    f"RasterImage samples must be 8-bit integers, got {samples.dtype}"
                )
            if samples.size and (samples.min() < 0 or samples.max() > 255):
                raise ImageFormatError("RasterImage samples must lie in [0, 255]")
        samples = np.array(samples, dtype=np.uint8, copy=True)
        if samples.ndim == 3 and samples.shape[2] == 1:
            samples = samples[:, :, 0]
        if samples.ndim not in (2, 3) or (samples.ndim == 3 and samples.shape[2] != 3):
            raise ImageFormatError(
                f"RasterImage needs 1 or 3 channels, got shape {samples.shape}"
            )
        if samples.shape[0] <= 0 or samples.shape[1] <= 0:
            raise ImageFormatError(f"Zero-size image: {samples.shape}")
        object.__setattr__(self, "samples", _frozen(samples))

    @property
    def width(self) -> int:
        return int(self.samples.shape[1])

    @property
    def height(self) -> int:
        return int(self.samples.shape[0])

    @property
    def channels(self) -> int:
        return 1 if self.samples.ndim == 2 else 3

    @property
    def shape(self) -> tuple[int, int]:
        """(width, height)"""
        return self.width, self.height

    @classmethod
    def filled(cls, width: int, height: int, value: int, channels: int = 1) -> RasterImage:
        shape = (height, width) if channels == 1 else (height, width, channels)
        return cls(np.full(shape, value, dtype=np.uint8))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.samples.shape == other.samples.shape and bool(
            np.array_equal(self.samples, other.samples)
        )

    def __hash__(self) -> int:
        return hash((self.samples.shape, self.samples.tobytes()))

    def __repr__(self) -> str:
        return f"RasterImage({self.width}x{self.height}x{self.channels})"


@dataclass(frozen=True)
class GeometryRecord:
    """
    Resize/pad metadata for one image. Applying `scale` to the original
    dimensions and then the four pads yields a `target_side` square.
    """

    original_width: int
    original_height: int
    scale: float
    target_side: int
    pad_left: int = 0
    pad_top: int = 0
    pad_right: int = 0
    pad_bottom: int = 0

    def __post_init__(self):
        if self.original_width <= 0 or self.original_height <= 0:
            raise ValueError("GeometryRecord original dimensions must be positive")
        if self.scale <= 0:
            raise ValueError(f"GeometryRecord scale must be positive, got {self.scale}")
        if min(self.pad_left, self.pad_top, self.pad_right, self.pad_bottom) < 0:
            raise ValueError("GeometryRecord pads must be non-negative")

    @classmethod
    def identity(cls, width: int, height: int) -> GeometryRecord:
        return cls(
            original_width=width,
            original_height=height,
            scale=1.0,
            target_side=max(width, height),
        )

    @property
    def resized_width(self) -> int:
        return round_half_up(self.original_width * self.scale)

    @property
    def resized_height(self) -> int:
        return round_half_up(self.original_height * self.scale)

    @property
    def padded_width(self) -> int:
        return self.resized_width + self.pad_left + self.pad_right

    @property
    def padded_height(self) -> int:
        return self.resized_height + self.pad_top + self.pad_bottom

    def to_dict(self) -> dict:
        return {
            "original_width": self.original_width,
            "original_height": self.original_height,
            "scale": self.scale,
            "target_side": self.target_side,
            "pad_left": self.pad_left,
            "pad_top": self.pad_top,
            "pad_right": self.pad_right,
            "pad_bottom": self.pad_bottom,
        }


def round_half_up(value: float) -> int:
    return int(np.floor(value + 0.5))


Raster = BinaryMask | RasterImage
