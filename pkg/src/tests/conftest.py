import numpy as np
import pytest

from lesionbench.masks import BinaryMask, RasterImage


@pytest.fixture
def rng():
    return np.random.default_rng(20180601)


@pytest.fixture
def random_mask(rng):
    """Factory for random masks of a given size and fill density"""

    def make(width: int, height: int, density: float = 0.5) -> BinaryMask:
        return BinaryMask(rng.random((height, width)) < density)

    return make


@pytest.fixture
def random_image(rng):
    def make(width: int, height: int, channels: int = 3) -> RasterImage:
        shape = (height, width) if channels == 1 else (height, width, channels)
        return RasterImage(rng.integers(0, 256, size=shape, dtype=np.uint8))

    return make
