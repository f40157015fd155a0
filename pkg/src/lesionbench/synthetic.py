"""
Seeded synthetic lesions: dark filled ellipses on bright, noisy skin-toned
backgrounds, with their exact masks.

The default intensities keep lesion and skin at least 4 noise standard
deviations apart on luminance, which is what lets the Otsu baseline score
S1 >= 0.90 on this generator.
"""
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import segmentation_name
from .masks import BinaryMask, RasterImage, write_image, write_mask

logger = logging.getLogger(__name__)

SKIN_RGB = (214, 178, 160)
LESION_RGB = (96, 62, 48)
NOISE_SIGMA = 12.0


@dataclass(frozen=True)
class SyntheticLesion:
    image_id: str
    image: RasterImage
    mask: BinaryMask


def ellipse_mask(
    width: int, height: int, cx: float, cy: float, a: float, b: float, angle: float
) -> BinaryMask:
    """Filled ellipse with semi-axes a, b rotated by `angle` radians"""
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    dx, dy = xs + 0.5 - cx, ys + 0.5 - cy
    cos, sin = np.cos(angle), np.sin(angle)
    u = (dx * cos + dy * sin) / a
    v = (-dx * sin + dy * cos) / b
    return BinaryMask(u**2 + v**2 <= 1.0)


def random_ellipse(rng: np.random.Generator, width: int, height: int) -> BinaryMask:
    short = min(width, height)
    a = rng.uniform(0.12, 0.35) * short
    b = rng.uniform(0.5, 1.0) * a
    margin = a + 2
    cx = rng.uniform(margin, width - margin)
    cy = rng.uniform(margin, height - margin)
    return ellipse_mask(width, height, cx, cy, a, b, rng.uniform(0, np.pi))


def generate_lesion(
    seed: int, index: int, width: int = 600, height: int = 450
) -> SyntheticLesion:
    """One lesion addressed by (seed, index)"""
    rng = np.random.default_rng([seed, index])
    mask = random_ellipse(rng, width, height)
    base = np.where(mask.bits[:, :, None], LESION_RGB, SKIN_RGB).astype(np.float64)
    noisy = base + rng.normal(0.0, NOISE_SIGMA, size=base.shape)
    image = RasterImage(np.clip(np.rint(noisy), 0, 255).astype(np.uint8))
    return SyntheticLesion(image_id=f"SYNTH_{index:07d}", image=image, mask=mask)


def write_dataset(
    out_dir: str | Path, count: int, seed: int, width: int = 600, height: int = 450
) -> tuple[Path, Path]:
    """
    Write `count` lesions as `images/<id>.png` and
    `masks/<id>_segmentation.png` under `out_dir`.
    """
    out_dir = Path(out_dir)
    image_dir, mask_dir = out_dir / "images", out_dir / "masks"
    image_dir.mkdir(parents=True, exist_ok=True)
    mask_dir.mkdir(parents=True, exist_ok=True)
    for index in range(count):
        lesion = generate_lesion(seed, index, width, height)
        write_image(lesion.image, image_dir / f"{lesion.image_id}.png")
        write_mask(lesion.mask, mask_dir / segmentation_name(lesion.image_id))
    logger.info(f"Wrote {count} synthetic lesions to {out_dir}")
    return image_dir, mask_dir
