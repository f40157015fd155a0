from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

LUMINOSITY_RANGE = (0.8, 1.5)
BLUR_SIGMA = 2.5
FLIP_PROBABILITY = 0.5
BLUR_PROBABILITY = 0.5


@dataclass(frozen=True)
class AugmentationSpec:
    """
    One draw of the training-time augmentation set. `blur_sigma` is 0 when
    no blur is applied.
    """

    flip_h: bool = False
    flip_v: bool = False
    quarter_turns: int = 0
    luminosity: float = 1.0
    blur_sigma: float = 0.0

    def __post_init__(self):
        if self.quarter_turns not in (0, 1, 2, 3):
            raise ValueError(f"quarter_turns must be in 0..3, got {self.quarter_turns}")
        low, high = LUMINOSITY_RANGE
        if not low <= self.luminosity <= high:
            raise ValueError(
                f"luminosity must lie in [{low}, {high}], got {self.luminosity}"
            )
        if self.blur_sigma < 0:
            raise ValueError(f"blur_sigma must be non-negative, got {self.blur_sigma}")

    @property
    def is_geometric_only(self) -> bool:
        return self.luminosity == 1.0 and self.blur_sigma == 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> AugmentationSpec:
        return cls(**data)


def sample_spec(rng_seed: int, draw_index: int) -> AugmentationSpec:
    """
    Draw a spec addressed by (seed, index): the same pair always yields the
    same spec, independent of any other draw.

    Each flip fires with probability 0.5, quarter turns are uniform in 0..3,
    luminosity is uniform in [0.8, 1.5] and blur (sigma 2.5) fires with
    probability 0.5.
    """
    if rng_seed < 0 or draw_index < 0:
        raise ValueError("rng_seed and draw_index must be non-negative")
    rng = np.random.default_rng([rng_seed, draw_index])
    flip_h = bool(rng.random() < FLIP_PROBABILITY)
    flip_v = bool(rng.random() < FLIP_PROBABILITY)
    quarter_turns = int(rng.integers(0, 4))
    luminosity = float(rng.uniform(*LUMINOSITY_RANGE))
    blur_sigma = BLUR_SIGMA if rng.random() < BLUR_PROBABILITY else 0.0
    return AugmentationSpec(
        flip_h=flip_h,
        flip_v=flip_v,
        quarter_turns=quarter_turns,
        luminosity=luminosity,
        blur_sigma=blur_sigma,
    )
